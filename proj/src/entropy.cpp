#include "spinet/entropy.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace spinet {

namespace {

void check_sizes(std::size_t a, std::size_t b, const char* who) {
  if (a != b) throw std::invalid_argument(std::string(who) + ": array sizes differ");
}

double flog(double n, double logT) { return n * (std::log(n) - 1.5 * logT); }

// (n+ - n-) log(n+/n-), zero when nv vanishes.
double exchange_weight(double n0, const Vec3& nv) {
  const double r = nv.norm();
  if (r == 0.0) return 0.0;
  return 2.0 * r * (std::log1p(r / n0) - std::log1p(-r / n0));
}

}  // namespace

double entropy_H1(const std::vector<double>& n0, const std::vector<Vec3>& nv, const std::vector<double>& T, double dx) {
  check_sizes(n0.size(), nv.size(), "entropy_H1");
  check_sizes(n0.size(), T.size(), "entropy_H1");
  double sum = 0.0;
  for (std::size_t k = 0; k < n0.size(); ++k) {
    const double r = nv[k].norm();
    const double np = n0[k] + r, nm = n0[k] - r;
    if (!(nm > 0.0) || !(T[k] > 0.0))
      throw std::invalid_argument("entropy_H1: inadmissible state in cell " + std::to_string(k));
    const double lt = std::log(T[k]);
    sum += flog(np, lt) + flog(nm, lt);
  }
  return sum * dx;
}

double entropy_H2(const std::vector<double>& n0, const std::vector<double>& W0, const std::vector<Vec3>& Wv, double dx) {
  check_sizes(n0.size(), W0.size(), "entropy_H2");
  check_sizes(n0.size(), Wv.size(), "entropy_H2");
  double sum = 0.0;
  for (std::size_t k = 0; k < n0.size(); ++k) {
    const double w = Wv[k].norm();
    if (!(n0[k] > 0.0) || !(W0[k] > w))
      throw std::invalid_argument("entropy_H2: inadmissible state in cell " + std::to_string(k));
    sum += n0[k] * std::log(n0[k] / (std::pow(W0[k] + w, 0.6) + std::pow(W0[k] - w, 0.6)));
  }
  return 2.5 * sum * dx;
}

double entropy_H3(const std::vector<double>& np, const std::vector<double>& nm, const std::vector<double>& Tp,
                  const std::vector<double>& Tm, double dx) {
  check_sizes(np.size(), nm.size(), "entropy_H3");
  check_sizes(np.size(), Tp.size(), "entropy_H3");
  check_sizes(np.size(), Tm.size(), "entropy_H3");
  double sum = 0.0;
  for (std::size_t k = 0; k < np.size(); ++k) {
    if (!(np[k] > 0.0 && nm[k] > 0.0 && Tp[k] > 0.0 && Tm[k] > 0.0))
      throw std::invalid_argument("entropy_H3: non-positive input in cell " + std::to_string(k));
    sum += flog(np[k], std::log(Tp[k])) + flog(nm[k], std::log(Tm[k]));
  }
  return sum * dx;
}

ProductionTerms entropy_production_1_terms(const std::vector<double>& n0, const std::vector<Vec3>& nv,
                                           const std::vector<double>& T, double dx, double D0, double tau_sf) {
  check_sizes(n0.size(), nv.size(), "entropy_production_1");
  check_sizes(n0.size(), T.size(), "entropy_production_1");
  const std::size_t m = n0.size();
  std::vector<double> sp(m), sm(m), st(m), xw(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double r = nv[k].norm();
    const double np = n0[k] + r, nm = n0[k] - r;
    if (!(nm > 0.0) || !(T[k] > 0.0))
      throw std::invalid_argument("entropy_production_1: inadmissible state in cell " + std::to_string(k));
    sp[k] = std::sqrt(np * T[k]);
    sm[k] = std::sqrt(nm * T[k]);
    st[k] = std::sqrt(T[k]);
    xw[k] = exchange_weight(n0[k], nv[k]);
  }
  ProductionTerms out;
  for (std::size_t k = 0; k + 1 < m; ++k) {
    const std::size_t l = k + 1;
    const double dp = sp[l] - sp[k], dm = sm[l] - sm[k], dt = st[l] - st[k];
    out.branch_gradient += 4.0 * (dp * dp + dm * dm) / dx;
    out.temperature += 20.0 * 0.5 * (n0[k] + n0[l]) * dt * dt / dx;
    const double rk = nv[k].norm(), rl = nv[l].norm();
    if (rk >= 1e-14 && rl >= 1e-14) {
      const Vec3 ds = nv[l] / rl - nv[k] / rk;
      out.spin_exchange += 0.5 * 0.5 * (xw[k] + xw[l]) * 0.5 * (T[k] + T[l]) * ds.squaredNorm() / dx;
    }
  }
  out.branch_gradient *= D0;
  out.temperature *= D0;
  out.spin_exchange *= D0;
  if (std::isfinite(tau_sf)) {
    double s = 0.0;
    for (std::size_t k = 0; k < m; ++k) s += xw[k];
    out.relaxation = 0.5 * s * dx / tau_sf;
  }
  return out;
}

double entropy_production_1(const std::vector<double>& n0, const std::vector<Vec3>& nv, const std::vector<double>& T,
                            double dx, double D0, double tau_sf) {
  return entropy_production_1_terms(n0, nv, T, dx, D0, tau_sf).total();
}

EntropyReport monotonicity_verdict(std::vector<EntropySample> series, double tolerance) {
  if (series.size() < 2) throw std::invalid_argument("monotonicity_verdict: need at least two samples");
  EntropyReport r;
  r.series = std::move(series);
  r.tolerance = tolerance;
  for (std::size_t k = 1; k < r.series.size(); ++k)
    r.max_violation = std::max(r.max_violation, r.series[k].H - r.series[k - 1].H);
  r.monotone_nonincreasing = r.max_violation <= tolerance;
  return r;
}

EntropyReport monotonicity_verdict(const std::vector<double>& H, double tolerance) {
  std::vector<EntropySample> s(H.size());
  for (std::size_t k = 0; k < H.size(); ++k) s[k] = {static_cast<long>(k), H[k], 0.0};
  return monotonicity_verdict(std::move(s), tolerance);
}

double kinetic_entropy_by_quadrature(const LagrangeParams& params, double rel_tol) {
  if (!params.integrable()) throw std::invalid_argument("kinetic_entropy_by_quadrature: parameters are not integrable");
  const double theta_max = -1.0 / (params.c0 + params.cv.norm());
  const double radius = std::sqrt(80.0 * theta_max);
  auto integrand = [&](double r) {
    const double k2 = r * r;
    const PauliVec x(params.a0 + 0.5 * params.c0 * k2, params.av + (0.5 * k2) * params.cv);
    // tr(M log M) = sum over the eigenvalues M+- = exp(x0 +- |xv|)
    double tr = 0.0;
    for (const double e : {x.eig_plus(), x.eig_minus()}) {
      const double mu = std::exp(e);
      if (mu > 0.0) tr += mu * std::log(mu);
    }
    return 4.0 * std::numbers::pi * k2 * tr;
  };
  double err = 0.0;
  const double v =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, radius, 20, 1e-14, &err);
  if (!(err <= rel_tol * std::max(1.0, std::abs(v))))
    throw std::runtime_error("kinetic_entropy_by_quadrature: quadrature did not converge");
  return v;
}

}  // namespace spinet
