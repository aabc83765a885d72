#include "spinet/model2_elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spinet/banded.hpp"
#include "spinet/closures.hpp"
#include "spinet/entropy.hpp"

namespace spinet {

namespace {

constexpr double a37 = 3.0 / 7.0;
constexpr double a57 = 5.0 / 7.0;

// (c - h Lap) x = rhs with Dirichlet values on the end faces.
std::vector<double> solve_shifted_laplacian(const std::vector<double>& c, double h, double dx,
                                            const std::vector<double>& rhs, double left, double right) {
  const int m = static_cast<int>(c.size());
  const double k = h / (dx * dx);
  Tridiagonal a(m);
  std::vector<double> b = rhs;
  for (int i = 0; i < m; ++i) {
    const double wl = i == 0 ? 2.0 : 1.0, wr = i == m - 1 ? 2.0 : 1.0;
    a.diag[i] = c[i] + k * (wl + wr);
    if (i > 0) a.lower[i] = -k;
    if (i + 1 < m) a.upper[i] = -k;
  }
  b[0] += 2.0 * k * left;
  b[m - 1] += 2.0 * k * right;
  return solve_tridiagonal(a, b);
}

template <class T>
T laplacian(const std::vector<T>& u, int i, const T& left, const T& right, double dx) {
  const int m = static_cast<int>(u.size());
  const T ul = i == 0 ? left : u[i - 1];
  const T ur = i == m - 1 ? right : u[i + 1];
  const double wl = i == 0 ? 2.0 : 1.0, wr = i == m - 1 ? 2.0 : 1.0;
  return (wl * (ul - u[i]) + wr * (ur - u[i])) / (dx * dx);
}

// v+^{5/7} + v-^{5/7} and the ratio g/z of the polarization factor
// g = (v+^{5/7} - v-^{5/7})/(v+^{5/7} + v-^{5/7}) to z = |v|/v0.
struct SpinFactor {
  double sum57;
  double g_over_z;
};

SpinFactor spin_factor(double v0, double r) {
  const double z = std::min(r / v0, 1.0);
  const double s = std::pow(v0, a57);
  const double sum57 = s * (std::pow(1.0 + z, a57) + std::pow(1.0 - z, a57));
  return {sum57, s * pow_diff_over_z(z, a57) / sum57};
}

std::string cell_msg(const char* what, int k) { return std::string(what) + " in cell " + std::to_string(k); }

}  // namespace

Model2Point transform_forward(double n0, double W0, const Vec3& Wv) {
  if (!(n0 > 0.0) || !(W0 > Wv.norm())) throw std::invalid_argument("transform_forward: requires n0 > 0 and W0 > |Wv|");
  const Model2Z z = model2_Z(n0, W0, Wv);
  return {2.0 / 3.0 * W0, z.Z0, z.Zv};
}

MomentPoint transform_inverse(double u, double v0, const Vec3& vv) {
  const double r = vv.norm();
  if (!(u > 0.0) || !(v0 > r)) throw std::invalid_argument("transform_inverse: requires u > 0 and v0 > |vv|");
  const double vp = v0 + r, vm = v0 - r;
  const double sum57 = std::pow(vp, a57) + std::pow(vm, a57);
  MomentPoint out;
  out.n0 = 5.0 * u * u * (std::pow(vp, a37) + std::pow(vm, a37)) / (sum57 * sum57);
  out.W0 = 1.5 * u;
  if (r >= 1e-14) {
    const SpinFactor f = spin_factor(v0, r);
    out.Wv = (1.5 * u * f.g_over_z / v0) * vv;  // 1.5 u g vv/|vv|
  }
  return out;
}

LambdaMu lambda_mu(double xi, double vp, double vm, double h, double tau_sf) {
  if (!(xi >= 0.0)) throw std::invalid_argument("lambda_mu: xi must be nonnegative");
  if (!(vp > 0.0) || !(vm >= 0.0) || vp < vm) throw std::invalid_argument("lambda_mu: requires vp >= vm >= 0, vp > 0");
  const double p5 = std::pow(vp, a57), m5 = std::pow(vm, a57);
  const double sum57 = p5 + m5;
  const double lambda = 2.5 * xi * (std::pow(vp, a37) + std::pow(vm, a37)) * (vp + vm) / (sum57 * sum57);
  const double rate = std::isfinite(tau_sf) ? h / tau_sf : 0.0;
  const double mu = 1.5 * (1.0 + rate) * xi * (p5 - m5) / sum57;
  return {lambda, mu};
}

double truncation(double f, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("truncation: eps must be positive");
  if (f <= 0.0) return 0.0;
  return std::min(f, 1.0 / eps);
}

std::vector<std::string> Model2Certificate::violations() const {
  std::vector<std::string> v;
  if (!(min_n0 > 0.0)) v.emplace_back("n0 > 0");
  if (!(min_W0 > 0.0)) v.emplace_back("W0 > 0");
  if (!(min_W0_over_n0 > 0.0)) v.emplace_back("inf W0/n0 > 0");
  if (!(sup_W_ratio < 1.0)) v.emplace_back("sup |Wv|/W0 < 1");
  if (!(min_v_margin > 0.0)) v.emplace_back("v0 > |vv|");
  if (!(min_u_over_v0 > 0.0)) v.emplace_back("u/v0 > 0");
  if (!(truncation_ratio <= 1.0 + 1e-12)) v.emplace_back("u/v0 <= 1/eps");
  return v;
}

void check_model2_admissible(const Model2State& prev, const Model2Boundary& bc) {
  const int m = prev.size();
  if (m < 3) throw std::invalid_argument("model2: need at least 3 cells");
  if (static_cast<int>(prev.W0.size()) != m || static_cast<int>(prev.Wv.size()) != m)
    throw std::invalid_argument("model2: array sizes differ");
  for (int k = 0; k < m; ++k) {
    if (!(prev.n0[k] > 0.0)) throw std::invalid_argument(cell_msg("model2: n0 <= 0", k));
    if (!(prev.W0[k] > 0.0)) throw std::invalid_argument(cell_msg("model2: W0 <= 0", k));
    if (!(prev.Wv[k].norm() < prev.W0[k])) throw std::invalid_argument(cell_msg("model2: |Wv| >= W0", k));
  }
  for (const MomentPoint* p : {&bc.left, &bc.right}) {
    const char* side = p == &bc.left ? "left" : "right";
    if (!(p->n0 > 0.0) || !(p->W0 > 0.0) || !(p->Wv.norm() < p->W0))
      throw std::invalid_argument(std::string("model2: inadmissible ") + side + " boundary data");
  }
}

double model2_direct_residual(const Model2State& prev, const Model2State& next, double h, double tau_sf,
                              const Model2Boundary& bc) {
  const int m = next.size();
  const double dx = 1.0 / m;
  std::vector<double> Z0(m);
  std::vector<Vec3> Zv(m);
  for (int k = 0; k < m; ++k) {
    const Model2Z z = model2_Z(next.n0[k], next.W0[k], next.Wv[k]);
    Z0[k] = z.Z0;
    Zv[k] = z.Zv;
  }
  const Model2Z zl = model2_Z(bc.left.n0, bc.left.W0, bc.left.Wv);
  const Model2Z zr = model2_Z(bc.right.n0, bc.right.W0, bc.right.Wv);
  const double rate = std::isfinite(tau_sf) ? 1.0 / tau_sf : 0.0;
  double r = 0.0;
  for (int k = 0; k < m; ++k) {
    const double rn = (next.n0[k] - prev.n0[k]) / h - 2.0 / 3.0 * laplacian(next.W0, k, bc.left.W0, bc.right.W0, dx);
    const double rw = (next.W0[k] - prev.W0[k]) / h - laplacian(Z0, k, zl.Z0, zr.Z0, dx);
    const Vec3 rv = (next.Wv[k] - prev.Wv[k]) / h - laplacian(Zv, k, zl.Zv, zr.Zv, dx) + rate * next.Wv[k];
    r = std::max({r, std::abs(rn), std::abs(rw), rv.lpNorm<Eigen::Infinity>()});
  }
  return r;
}

Model2Result solve_time_step(const Model2State& prev, double h, double tau_sf, const Model2Boundary& bc,
                             const Model2Options& options) {
  if (!(h > 0.0)) throw std::invalid_argument("solve_time_step: h must be positive");
  if (!(tau_sf > 0.0)) throw std::invalid_argument("solve_time_step: tau_sf must be positive");
  if (!(options.damping > 0.0 && options.damping <= 1.0))
    throw std::invalid_argument("solve_time_step: damping must lie in (0,1]");
  check_model2_admissible(prev, bc);
  const int m = prev.size();
  const double dx = 1.0 / m;

  const Model2Point dl = transform_forward(bc.left.n0, bc.left.W0, bc.left.Wv);
  const Model2Point dr = transform_forward(bc.right.n0, bc.right.W0, bc.right.Wv);
  double eps = options.eps_trunc;
  if (!(eps > 0.0)) {
    double inf_ratio = std::numeric_limits<double>::infinity();
    for (int k = 0; k < m; ++k) inf_ratio = std::min(inf_ratio, prev.W0[k] / prev.n0[k]);
    const double sup_bd = std::max(dl.u / dl.v0, dr.u / dr.v0);
    eps = std::min(inf_ratio, 1.0 / sup_bd);
  }

  // Iterate x = (rho, nu0, nu) from the transformed previous state.
  std::vector<double> rho(m), nu0(m);
  std::vector<Vec3> nu(m);
  for (int k = 0; k < m; ++k) {
    const Model2Point p = transform_forward(prev.n0[k], prev.W0[k], prev.Wv[k]);
    rho[k] = p.u / p.v0;
    nu0[k] = p.v0;
    nu[k] = p.vv;
  }

  const double rate = std::isfinite(tau_sf) ? h / tau_sf : 0.0;
  std::vector<double> cu(m), cv0(m), cvec(m), u, v0;
  std::vector<Vec3> vv(m);
  std::vector<double> rhs(m);
  Model2Result res;
  double omega = options.damping;
  double last = std::numeric_limits<double>::infinity();

  auto apply_map = [&]() {
    for (int k = 0; k < m; ++k) {
      const double xi = truncation(rho[k], eps);
      const double r = nu[k].norm();
      const double vp = std::max(0.0, nu0[k] + r), vm = std::max(0.0, nu0[k] - r);
      if (!(vp > 0.0)) throw std::runtime_error(cell_msg("solve_time_step: iterate left the admissible cone", k));
      const LambdaMu lm = lambda_mu(xi, vp, vm, h, tau_sf);
      cu[k] = lm.lambda;
      cv0[k] = 1.5 * xi;
      cvec[k] = 1.5 * (1.0 + rate) * xi * spin_factor(nu0[k], r).g_over_z;  // mu nu0/|nu|
    }
    u = solve_shifted_laplacian(cu, h, dx, prev.n0, dl.u, dr.u);
    v0 = solve_shifted_laplacian(cv0, h, dx, prev.W0, dl.v0, dr.v0);
    for (int d = 0; d < 3; ++d) {
      for (int k = 0; k < m; ++k) {
        rhs[k] = prev.Wv[k][d];
        if (options.spin_source == SpinSource::explicit_source) {
          const double r = nu[k].norm();
          if (r > 0.0) rhs[k] -= cvec[k] * nu[k][d];
        }
      }
      const std::vector<double> coeff =
          options.spin_source == SpinSource::lagged_coefficient ? cvec : std::vector<double>(m, 0.0);
      const std::vector<double> sol = solve_shifted_laplacian(coeff, h, dx, rhs, dl.vv[d], dr.vv[d]);
      for (int k = 0; k < m; ++k) vv[k][d] = sol[k];
    }
  };

  for (int it = 1; it <= options.max_iter; ++it) {
    try {
      apply_map();
    } catch (const std::exception&) {
      res.status = Model2Status::not_converged;
      res.iterations = it;
      res.final_damping = omega;
      return res;
    }
    double r = 0.0;
    for (int k = 0; k < m; ++k) {
      const double fr = u[k] / v0[k];
      r = std::max({r, std::abs(fr - rho[k]), std::abs(v0[k] - nu0[k]), (vv[k] - nu[k]).lpNorm<Eigen::Infinity>()});
    }
    res.residual_trace.push_back(r);
    res.iterations = it;
    if (r < options.tol) break;
    if (r > last) omega = std::max(0.5 * omega, options.min_damping);
    last = r;
    for (int k = 0; k < m; ++k) {
      rho[k] += omega * (u[k] / v0[k] - rho[k]);
      nu0[k] += omega * (v0[k] - nu0[k]);
      nu[k] += omega * (vv[k] - nu[k]);
    }
  }
  res.final_damping = omega;
  Model2Certificate& cert = res.certificate;
  cert.residual = res.residual_trace.empty() ? cert.residual : res.residual_trace.back();
  cert.eps = eps;
  if (!(cert.residual < options.tol)) {
    res.status = Model2Status::not_converged;
    return res;
  }

  res.state.n0.resize(m);
  res.state.W0.resize(m);
  res.state.Wv.resize(m);
  cert.min_n0 = cert.min_W0 = cert.min_W0_over_n0 = cert.min_v_margin = cert.min_u_over_v0 =
      std::numeric_limits<double>::infinity();
  double max_uv = 0.0;
  bool inverse_ok = true;
  for (int k = 0; k < m; ++k) {
    const double r = vv[k].norm();
    cert.min_v_margin = std::min(cert.min_v_margin, v0[k] - r);
    cert.min_u_over_v0 = std::min(cert.min_u_over_v0, u[k] / v0[k]);
    max_uv = std::max(max_uv, u[k] / v0[k]);
    if (!(u[k] > 0.0) || !(v0[k] > r)) {
      inverse_ok = false;
      continue;
    }
    const MomentPoint mp = transform_inverse(u[k], v0[k], vv[k]);
    res.state.n0[k] = mp.n0;
    res.state.W0[k] = mp.W0;
    res.state.Wv[k] = mp.Wv;
    cert.min_n0 = std::min(cert.min_n0, mp.n0);
    cert.min_W0 = std::min(cert.min_W0, mp.W0);
    cert.min_W0_over_n0 = std::min(cert.min_W0_over_n0, mp.W0 / mp.n0);
    cert.sup_W_ratio = std::max(cert.sup_W_ratio, mp.Wv.norm() / mp.W0);
  }
  cert.truncation_ratio = max_uv * eps;
  cert.margin = 1.0 - cert.sup_W_ratio;
  if (!inverse_ok) {
    cert.min_n0 = std::min(cert.min_n0, 0.0);
    res.status = Model2Status::certificate_violation;
    return res;
  }
  cert.direct_residual = model2_direct_residual(prev, res.state, h, tau_sf, bc);
  cert.H2_prev = entropy_H2(prev.n0, prev.W0, prev.Wv, dx);
  cert.H2 = entropy_H2(res.state.n0, res.state.W0, res.state.Wv, dx);
  res.status = cert.clean() ? Model2Status::converged : Model2Status::certificate_violation;
  return res;
}

}  // namespace spinet
