#include "spinet/closures.hpp"

#include <array>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace spinet {

namespace {

constexpr double pi = std::numbers::pi;

Vec3 unit_or_zero(const Vec3& v) {
  const double r = v.norm();
  return r > 0.0 ? Vec3(v / r) : Vec3::Zero();
}

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

double pow_diff(double z, double alpha) {
  if (z < 0.5) {
    // (1-z)^a * expm1(a*(log1p(z) - log1p(-z)))
    return std::exp(alpha * std::log1p(-z)) * std::expm1(alpha * (std::log1p(z) - std::log1p(-z)));
  }
  return std::pow(1.0 + z, alpha) - std::pow(std::max(0.0, 1.0 - z), alpha);
}

double pow_diff_over_z(double z, double alpha) {
  if (z < 1e-8) return 2.0 * alpha * (1.0 + (alpha - 1.0) * (alpha - 2.0) * z * z / 6.0);
  return pow_diff(z, alpha) / z;
}

PauliVec maxwellian_pauli(const LagrangeParams& params, double k2) {
  return pauli_exp({params.a0 + 0.5 * params.c0 * k2, params.av + (0.5 * k2) * params.cv});
}

FullMoments moments_by_quadrature(const LagrangeParams& params, double rel_tol) {
  require(params.integrable(), "moments_by_quadrature: parameters are not integrable (c0 + |cv| >= 0)");
  const double theta_max = -1.0 / (params.c0 + params.cv.norm());
  const double radius = std::sqrt(80.0 * theta_max);

  // Radial weights 4 pi r^2 * {1, r^2/2, r^4/6}; 12 scalar integrands.
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  std::array<double, 12> value{};
  std::array<double, 12> err{};
  for (int q = 0; q < 12; ++q) {
    const int order = q / 4;  // 0: n, 1: W, 2: Q
    const int comp = q % 4;   // 0: scalar, 1..3: vector components
    auto integrand = [&](double r) {
      const double r2 = r * r;
      const PauliVec m = maxwellian_pauli(params, r2);
      const double weight = 4.0 * pi * r2 * (order == 0 ? 1.0 : order == 1 ? 0.5 * r2 : r2 * r2 / 6.0);
      return weight * (comp == 0 ? m.s0 : m.sv[comp - 1]);
    };
    value[q] = GK::integrate(integrand, 0.0, radius, 20, 1e-13, &err[q]);
  }
  for (int q = 0; q < 12; ++q) {
    const double scale = std::abs(value[(q / 4) * 4]);
    if (!(err[q] <= rel_tol * scale)) throw std::runtime_error("moments_by_quadrature: quadrature did not converge");
  }
  FullMoments out;
  out.m.n0 = value[0];
  out.m.nv = Vec3(value[1], value[2], value[3]);
  out.m.W0 = value[4];
  out.m.Wv = Vec3(value[5], value[6], value[7]);
  out.Q0 = value[8];
  out.Qv = Vec3(value[9], value[10], value[11]);
  return out;
}

// -- first model -------------------------------------------------------------

Model1Closure model1_closure(double n0, const Vec3& nv, double T) {
  require(n0 > 0.0 && T > 0.0, "model1_closure: n0 and T must be positive");
  require(nv.norm() <= n0, "model1_closure: |nv| must not exceed n0");
  return {1.5 * T * nv, 2.5 * n0 * T * T};
}

FullMoments model1_moments(double n0, const Vec3& nv, double T) {
  const Model1Closure c = model1_closure(n0, nv, T);
  FullMoments out;
  out.m = {n0, nv, 1.5 * n0 * T, c.Wv};
  out.Q0 = c.Q0;
  out.Qv = 2.5 * T * T * nv;
  return out;
}

LagrangeParams model1_params(double n0, const Vec3& nv, double T) {
  const double r = nv.norm();
  require(n0 > 0.0 && T > 0.0 && r < n0, "model1_params: requires n0 > |nv| and T > 0");
  const double np = n0 + r, nm = n0 - r;
  LagrangeParams p;
  p.c0 = -1.0 / T;
  p.a0 = 0.5 * std::log(np * nm) - 1.5 * std::log(2.0 * pi * T);
  p.av = 0.5 * std::log(np / nm) * unit_or_zero(nv);
  return p;
}

// -- second model ------------------------------------------------------------

double model2_polarization_factor(double a, double b) {
  const double a53 = std::pow(a, 5.0 / 3.0), b53 = std::pow(b, 5.0 / 3.0);
  return (a53 - b53) / (a53 + b53);
}

Model2Coeffs model2_coeffs(double np, double nm) {
  require(np > 0.0, "model2_coeffs: n+ must be positive");
  require(nm >= 0.0 && np >= nm, "model2_coeffs: requires n+ >= n- >= 0");
  const double n0 = 0.5 * (np + nm);
  const double s53 = std::pow(np, 5.0 / 3.0) + std::pow(nm, 5.0 / 3.0);
  const double s73 = std::pow(np, 7.0 / 3.0) + std::pow(nm, 7.0 / 3.0);
  return {2.0 * n0 * s73 / (s53 * s53), model2_polarization_factor(np, nm)};
}

Model2Z model2_Z(double n0, double W0, const Vec3& Wv) {
  require(n0 > 0.0, "model2_Z: n0 must be positive");
  const double w = Wv.norm();
  require(W0 > w, "model2_Z: requires W0 > |Wv|");
  const double z = w / W0;
  const double w35 = std::pow(W0, 0.6), w75 = std::pow(W0, 1.4);
  const double s3 = w35 * (std::pow(1.0 + z, 0.6) + std::pow(1.0 - z, 0.6));
  const double s7 = w75 * (std::pow(1.0 + z, 1.4) + std::pow(1.0 - z, 1.4));
  // Differences W+^a - W-^a along Wv/|Wv|, written as (.../z) * Wv/W0.
  const Vec3 dir_z = Wv / W0;
  const Vec3 d3 = w35 * pow_diff_over_z(z, 0.6) * dir_z;
  const Vec3 d7 = w75 * pow_diff_over_z(z, 1.4) * dir_z;
  const double pre = 5.0 / (18.0 * n0) * s3;
  return {pre * s7, pre * d7, (n0 / s3) * d3};
}

FullMoments model2_moments(double n0, double W0, const Vec3& Wv) {
  const Model2Z z = model2_Z(n0, W0, Wv);
  FullMoments out;
  out.m = {n0, z.nv, W0, Wv};
  out.Q0 = z.Z0;
  out.Qv = z.Zv;
  return out;
}

LagrangeParams model2_params(double n0, double W0, const Vec3& Wv) {
  require(n0 > 0.0 && W0 > Wv.norm(), "model2_params: requires n0 > 0 and W0 > |Wv|");
  const double w = Wv.norm();
  const double wp = W0 + w, wm = W0 - w;
  const double s3 = std::pow(wp, 0.6) + std::pow(wm, 0.6);
  const double K = 2.0 * std::pow(3.0, 1.5) * std::pow(n0, 2.5) * std::pow(s3, -2.5);
  const double theta_p = std::pow(wp, 0.4) * s3 / (3.0 * n0);
  const double theta_m = std::pow(wm, 0.4) * s3 / (3.0 * n0);
  LagrangeParams p;
  p.a0 = std::log(K / std::pow(2.0 * pi, 1.5));
  p.c0 = -0.5 * (1.0 / theta_p + 1.0 / theta_m);
  p.cv = 0.5 * (1.0 / theta_m - 1.0 / theta_p) * unit_or_zero(Wv);
  return p;
}

FullMoments model2_moments_from_params(const LagrangeParams& params) {
  require(params.integrable(), "model2_moments_from_params: parameters are not integrable");
  require(params.av.norm() == 0.0, "model2_moments_from_params: requires av = 0");
  const double c = params.cv.norm();
  const double K = std::pow(2.0 * pi, 1.5) * std::exp(params.a0);
  const double tp = -1.0 / (params.c0 + c), tm = -1.0 / (params.c0 - c);
  const Vec3 g = unit_or_zero(params.cv);
  FullMoments out;
  out.m.n0 = 0.5 * K * (std::pow(tp, 1.5) + std::pow(tm, 1.5));
  out.m.nv = 0.5 * K * (std::pow(tp, 1.5) - std::pow(tm, 1.5)) * g;
  out.m.W0 = 0.75 * K * (std::pow(tp, 2.5) + std::pow(tm, 2.5));
  out.m.Wv = 0.75 * K * (std::pow(tp, 2.5) - std::pow(tm, 2.5)) * g;
  out.Q0 = 1.25 * K * (std::pow(tp, 3.5) + std::pow(tm, 3.5));
  out.Qv = 1.25 * K * (std::pow(tp, 3.5) - std::pow(tm, 3.5)) * g;
  return out;
}

// -- third model -------------------------------------------------------------

Model3Closure model3_closure(double np, double nm, double Tp, double Tm, const Vec3& s) {
  require(np > 0.0 && nm > 0.0 && Tp > 0.0 && Tm > 0.0, "model3_closure: densities and temperatures must be positive");
  const double a = np * Tp * Tp, b = nm * Tm * Tm;
  return {1.25 * (a + b), 1.25 * (a - b) * s};
}

FullMoments model3_moments(double np, double nm, double Tp, double Tm, const Vec3& s) {
  const Model3Closure c = model3_closure(np, nm, Tp, Tm, s);
  FullMoments out;
  out.m.n0 = 0.5 * (np + nm);
  out.m.nv = 0.5 * (np - nm) * s;
  out.m.W0 = 0.75 * (np * Tp + nm * Tm);
  out.m.Wv = 0.75 * (np * Tp - nm * Tm) * s;
  out.Q0 = c.Q0;
  out.Qv = c.Qv;
  return out;
}

LagrangeParams model3_params(double np, double nm, double Tp, double Tm, const Vec3& s) {
  require(np > 0.0 && nm > 0.0 && Tm > 0.0, "model3_params: densities and temperatures must be positive");
  require(Tp >= Tm, "model3_params: requires T+ >= T-");
  require(std::abs(s.norm() - 1.0) <= 1e-12, "model3_params: s must be a unit vector");
  const double lp = std::log(np) - 1.5 * std::log(2.0 * pi * Tp);
  const double lm = std::log(nm) - 1.5 * std::log(2.0 * pi * Tm);
  const double c = 0.5 * (1.0 / Tm - 1.0 / Tp);
  if (c <= 1e-14 / Tm && std::abs(lp - lm) > 1e-14)
    throw std::invalid_argument("model3_params: T+ == T- with n+ != n- admits no finite lambda");
  LagrangeParams p;
  p.a0 = 0.5 * (lp + lm);
  p.c0 = -0.5 * (1.0 / Tp + 1.0 / Tm);
  p.cv = c * s;
  p.av = 0.5 * (lp - lm) * s;  // = lambda * cv
  return p;
}

Vec3 model3_s_rhs(const SpinRhsInput& in) {
  require(std::abs(in.s.norm() - 1.0) <= 1e-12, "model3_s_rhs: s must be a unit vector");
  const double col_scale = std::max(1.0, in.grad_s.norm());
  require((in.s.transpose() * in.grad_s).norm() <= 1e-10 * col_scale, "model3_s_rhs: columns of grad_s must be orthogonal to s");
  const double dn = in.np - in.nm;
  require(dn != 0.0, "model3_s_rhs: n+ == n- leaves the coefficient undefined");
  const double coeff = (in.np * in.Tp - in.nm * in.Tm) / dn;
  const Vec3 drift = 2.0 * in.grad_nT / dn + in.grad_V;
  return coeff * in.s.cross(in.lap_s.cross(in.s)) + in.grad_s * drift - in.omega_e.cross(in.s);
}

}  // namespace spinet
