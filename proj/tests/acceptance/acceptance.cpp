// Acceptance suite. With no arguments every criterion runs; otherwise only
// the listed numbers. Exit status is nonzero if any selected criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "spinet/closures.hpp"
#include "spinet/device.hpp"
#include "spinet/entropy.hpp"
#include "spinet/fvm.hpp"
#include "spinet/model2_elliptic.hpp"
#include "spinet/pauli.hpp"
#include "support.hpp"

using namespace spinet;
using namespace spinet::testing;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double component_error(const PauliVec& got, const Mat2c& want) {
  const PauliCoords c = from_matrix(want);
  double e = std::abs(got.s0 - c.c0);
  for (int j = 0; j < 3; ++j) e = std::max(e, std::abs(got.sv[j] - c.cv[j]));
  return e;
}

template <class F>
Mat2c spectral_oracle(F&& f, const Mat2c& m) {
  Eigen::SelfAdjointEigenSolver<Mat2c> es(m);
  Eigen::Vector2cd d;
  for (int i = 0; i < 2; ++i) d[i] = f(es.eigenvalues()[i]);
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

PauliVec random_pauli(std::mt19937_64& rng, double scale) { return {uniform(rng, -scale, scale), random_vec(rng, scale)}; }

Verdict pauli_algebra() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1001);
  double e_mul = 0.0, e_exp = 0.0, e_fn = 0.0;
  for (int t = 0; t < 10000; ++t) {
    const PauliVec a = random_pauli(rng, 2.0), b = random_pauli(rng, 2.0);
    const PauliProduct p = pauli_mul(a, b);
    const PauliCoords c = from_matrix(to_matrix(a) * to_matrix(b));
    e_mul = std::max(e_mul, std::abs(p.hermitian.s0 - c.c0));
    for (int j = 0; j < 3; ++j)
      e_mul = std::max(e_mul, std::abs(std::complex<double>(p.hermitian.sv[j], p.skew[j]) - c.cv[j]));

    const PauliVec x = random_pauli(rng, 1.0);
    const Mat2c ex = to_matrix(x).exp();
    e_exp = std::max(e_exp, component_error(pauli_exp(x), ex));

    e_fn = std::max(e_fn, component_error(pauli_fn([](double v) { return std::tanh(v); }, a),
                                          spectral_oracle([](double v) { return std::tanh(v); }, to_matrix(a))));
    PauliVec pd(uniform(rng, 0.1, 3.0), Vec3::Zero());
    pd.sv = random_unit(rng) * uniform(rng, 0.0, 0.95) * pd.s0;
    e_fn = std::max(e_fn, component_error(pauli_fn([](double v) { return std::sqrt(v); }, pd),
                                          spectral_oracle([](double v) { return std::sqrt(v); }, to_matrix(pd))));
    e_fn = std::max(e_fn, component_error(pauli_log(pd), spectral_oracle([](double v) { return std::log(v); }, to_matrix(pd))));
  }
  const double s = seconds_since(t0);
  const double worst = std::max({e_mul, e_exp, e_fn});
  return {worst <= 1e-12 && s < 5.0, "mul " + fmt("%.2e", e_mul) + ", exp " + fmt("%.2e", e_exp) + ", fn " +
                                         fmt("%.2e", e_fn) + ", " + fmt("%.2f", s) + " s"};
}

double rel(double got, double want) { return std::abs(got - want) / std::max(1e-300, std::abs(want)); }

double moment_error(const FullMoments& a, const FullMoments& b) {
  double e = std::max({rel(a.m.n0, b.m.n0), rel(a.m.W0, b.m.W0), rel(a.Q0, b.Q0)});
  e = std::max(e, (a.m.nv - b.m.nv).norm() / b.m.n0);
  e = std::max(e, (a.m.Wv - b.m.Wv).norm() / b.m.W0);
  return std::max(e, (a.Qv - b.Qv).norm() / b.Q0);
}

Verdict moment_closures() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1002);
  double e1 = 0.0, e2 = 0.0, e3 = 0.0;
  for (int t = 0; t < 100; ++t) {
    const double n0 = uniform(rng, 0.2, 5.0), T = uniform(rng, 0.3, 4.0);
    const Vec3 nv = random_unit(rng) * uniform(rng, 0.0, 0.95) * n0;
    e1 = std::max(e1, moment_error(model1_moments(n0, nv, T), moments_by_quadrature(model1_params(n0, nv, T))));
  }
  for (int t = 0; t < 100; ++t) {
    const double n0 = uniform(rng, 0.2, 5.0), W0 = uniform(rng, 0.2, 5.0);
    const Vec3 Wv = random_unit(rng) * uniform(rng, 0.0, 0.95) * W0;
    e2 = std::max(e2, moment_error(model2_moments(n0, W0, Wv), moments_by_quadrature(model2_params(n0, W0, Wv))));
  }
  for (int t = 0; t < 100; ++t) {
    const double np = uniform(rng, 0.2, 3.0), nm = uniform(rng, 0.2, 3.0);
    const double Tm = uniform(rng, 0.3, 3.0), Tp = Tm * uniform(rng, 1.05, 2.0);
    const Vec3 s = random_unit(rng);
    e3 = std::max(e3, moment_error(model3_moments(np, nm, Tp, Tm, s),
                                   moments_by_quadrature(model3_params(np, nm, Tp, Tm, s))));
  }
  const double sec = seconds_since(t0);
  return {std::max({e1, e2, e3}) <= 1e-6 && sec < 30.0, "model1 " + fmt("%.2e", e1) + ", model2 " + fmt("%.2e", e2) +
                                                            ", model3 " + fmt("%.2e", e3) + ", " + fmt("%.2f", sec) + " s"};
}

Verdict coefficient_bounds() {
  const double slack = 1e-12;
  int bad = 0;
  double dlo = 2.0, dhi = 0.0, zlo = 2.0, zhi = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double z = i / 999.0;
    const double D = model2_coeffs(1.0 + z, 1.0 - z).D;
    dlo = std::min(dlo, D);
    dhi = std::max(dhi, D);
    if (D < 1.0 - slack || D > 1.1 + slack) ++bad;

    const double n0 = 1.3, W0 = 2.1, T = 2.0 / 3.0 * W0 / n0;
    const double r = model2_Z(n0, W0, Vec3(0.0, 0.0, std::min(z, 0.999999) * W0)).Z0 / (2.5 * n0 * T * T);
    zlo = std::min(zlo, r);
    zhi = std::max(zhi, r);
    if (r < 1.0 - slack || r > 1.08 + slack) ++bad;
  }
  std::mt19937_64 rng(1003);
  int bad_lm = 0;
  for (int t = 0; t < 10000; ++t) {
    const double xi = uniform(rng, 0.0, 10.0), vp = uniform(rng, 1e-3, 10.0), vm = vp * uniform(rng, 0.0, 1.0);
    const double h = uniform(rng, 1e-4, 1.0), tau = uniform(rng, 0.1, 10.0);
    const LambdaMu lm = lambda_mu(xi, vp, vm, h, tau);
    const double s = slack * std::max(1.0, xi);
    if (lm.lambda < 2.5 * xi - s || lm.lambda > 6.0 * xi + s) ++bad_lm;
    if (lm.mu < -s || lm.mu > 1.5 * (1.0 + h / tau) * xi + s) ++bad_lm;
  }
  return {bad == 0 && bad_lm == 0, "D in [" + fmt("%.12f", dlo) + ", " + fmt("%.12f", dhi) + "], Z0 ratio in [" +
                                       fmt("%.12f", zlo) + ", " + fmt("%.12f", zhi) + "], lambda/mu violations " +
                                       std::to_string(bad_lm)};
}

Verdict entropy_monotonicity() {
  const auto t0 = std::chrono::steady_clock::now();
  EntropyRunOptions opt;
  opt.m = 200;
  opt.steps = 2000;
  opt.tolerance = 1e-10;
  const EntropyTrajectory tr = entropy_trajectory_run(perturbed_uniform_state(opt.m, 1004), opt);
  double min_prod = INFINITY;
  for (const EntropySample& s : tr.report.series) min_prod = std::min(min_prod, s.production);
  double drift = 0.0;
  for (std::size_t k = 1; k < tr.mass.size(); ++k) drift = std::max(drift, std::abs(tr.mass[k] - tr.mass[k - 1]));
  const double sec = seconds_since(t0);
  const bool ok = tr.report.monotone_nonincreasing && tr.report.max_violation <= 1e-10 && min_prod >= 0.0 &&
                  drift <= 1e-12 && tr.report.series.size() == 2001 && sec < 60.0;
  return {ok, "max violation " + fmt("%.2e", tr.report.max_violation) + ", min production " + fmt("%.3e", min_prod) +
                  ", max mass drift " + fmt("%.2e", drift) + ", " + fmt("%.1f", sec) + " s"};
}

double max_state_diff(const SimState& a, const SimState& b) {
  double e = 0.0;
  for (int k = 0; k < a.size(); ++k) {
    e = std::max({e, std::abs(a.n0[k] - b.n0[k]), (a.nv[k] - b.nv[k]).lpNorm<Eigen::Infinity>(),
                  std::abs(a.W0[k] - b.W0[k]), std::abs(a.T[k] - b.T[k]), std::abs(a.V[k] - b.V[k])});
  }
  return e;
}

Verdict degeneracy() {
  const DeviceProfile d = preset_three_layer().with_polarization(0.0);
  const DeviceGrid g = sample_on_grid(d, 334);
  SchemeParams pol = scheme_params(d), plain = pol;
  plain.polarized = false;
  SimState a = initial_state(g, pol), b = initial_state(g, plain);
  for (int it = 0; it < 100; ++it) {
    a = step(a, g, pol, 5e-4);
    b = step(b, g, plain, 5e-4);
  }
  const double e = max_state_diff(a, b);
  return {e <= 1e-12, "max difference " + fmt("%.2e", e) + " after 100 steps"};
}

// Distance in cells from x_target to the nearest local extremum of u.
double nearest_extremum_cells(const std::vector<double>& u, double dx, double x_target) {
  double best = INFINITY;
  for (std::size_t k = 1; k + 1 < u.size(); ++k) {
    const bool mx = u[k] >= u[k - 1] && u[k] >= u[k + 1];
    const bool mn = u[k] <= u[k - 1] && u[k] <= u[k + 1];
    if (mx || mn) best = std::min(best, std::abs((k + 0.5) * dx - x_target) / dx);
  }
  return best;
}

Verdict three_layer_structure() {
  const auto t0 = std::chrono::steady_clock::now();
  const DeviceProfile d = preset_three_layer();
  const DeviceGrid g = sample_on_grid(d, 334);
  SteadyResult et, dd;
  std::thread a([&] { et = steady_state(g, scheme_params(d, Mode::energy_transport), SteadyOptions{}); });
  std::thread b([&] { dd = steady_state(g, scheme_params(d, Mode::drift_diffusion), SteadyOptions{}); });
  a.join();
  b.join();
  std::vector<double> n3;
  for (const Vec3& v : et.state.nv) n3.push_back(v[2]);
  const double left = nearest_extremum_cells(n3, g.dx, 1.0 / 6.0);
  const double right = nearest_extremum_cells(n3, g.dx, 5.0 / 6.0);
  auto peak = [](const SimState& s) {
    double p = 0.0;
    for (const Vec3& v : s.nv) p = std::max(p, std::abs(v[2]));
    return p;
  };
  const double pe = peak(et.state), pd = peak(dd.state);
  const double sec = seconds_since(t0);
  const bool ok = et.report.converged && dd.report.converged && left <= 3.0 && right <= 3.0 && pe < pd && sec < 600.0;
  return {ok, "extremum offset left " + fmt("%.2f", left) + " cells, right " + fmt("%.2f", right) +
                  " cells, max|n3| ET " + fmt("%.4e", pe) + " vs DD " + fmt("%.4e", pd) + ", " + fmt("%.0f", sec) + " s"};
}

Verdict polarization_sweeps() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> ps{0.0, 0.33, 0.66};
  const std::vector<DeviceProfile> bases{preset_three_layer(), preset_five_layer()};
  std::vector<double> maxT(6, NAN);
  std::vector<int> conv(6, 0);
  std::vector<std::thread> pool;
  for (int b = 0; b < 2; ++b) {
    for (int i = 0; i < 3; ++i) {
      pool.emplace_back([&, b, i] {
        const DeviceProfile d = bases[b].with_polarization(ps[i]);
        const SteadyResult r = steady_state(sample_on_grid(d, 334), scheme_params(d), SteadyOptions{});
        double t = 0.0;
        for (double v : r.state.T) t = std::max(t, v);
        maxT[3 * b + i] = t;
        conv[3 * b + i] = r.report.converged;
      });
    }
  }
  for (std::thread& t : pool) t.join();
  bool all = true;
  for (int c : conv) all = all && c;
  const bool inc = maxT[0] < maxT[1] && maxT[1] < maxT[2];
  const bool dec = maxT[3] > maxT[4] && maxT[4] > maxT[5];
  const double sec = seconds_since(t0);
  return {all && inc && dec && sec < 1800.0,
          "three-layer max T " + fmt("%.6f", maxT[0]) + " " + fmt("%.6f", maxT[1]) + " " + fmt("%.6f", maxT[2]) +
              ", five-layer " + fmt("%.6f", maxT[3]) + " " + fmt("%.6f", maxT[4]) + " " + fmt("%.6f", maxT[5]) +
              ", " + fmt("%.0f", sec) + " s"};
}

Verdict model2_solver() {
  const auto t0 = std::chrono::steady_clock::now();
  const double h = 1e-3, tau = 1.0;
  int failures = 0;
  double worst_res = 0.0, worst_direct = 0.0, worst_ratio = 0.0, worst_trunc = 0.0;
  for (unsigned seed = 0; seed < 20; ++seed) {
    Model2State s;
    Model2Boundary bc;
    random_model2_state(100, 2000 + seed, s, bc);
    const Model2Result r = solve_time_step(s, h, tau, bc);
    const Model2Certificate& c = r.certificate;
    const double direct = model2_direct_residual(s, r.state, h, tau, bc);
    const bool ok = r.status == Model2Status::converged && c.residual <= 1e-8 && c.min_n0 > 0.0 && c.min_W0 > 0.0 &&
                    c.sup_W_ratio < 1.0 && c.truncation_ratio <= 1.0 && direct <= 1e-7;
    if (!ok) ++failures;
    worst_res = std::max(worst_res, c.residual);
    worst_direct = std::max(worst_direct, direct);
    worst_ratio = std::max(worst_ratio, c.sup_W_ratio);
    worst_trunc = std::max(worst_trunc, c.truncation_ratio);
  }
  int spin_leaks = 0;
  for (unsigned seed = 0; seed < 5; ++seed) {
    Model2State s;
    Model2Boundary bc;
    random_model2_state(100, 3000 + seed, s, bc, true);
    const Model2Result r = solve_time_step(s, h, tau, bc);
    if (r.status != Model2Status::converged) ++failures;
    for (const Vec3& w : r.state.Wv)
      if (w.norm() != 0.0) ++spin_leaks;
  }
  const double sec = seconds_since(t0);
  return {failures == 0 && spin_leaks == 0 && sec < 120.0,
          "failures " + std::to_string(failures) + ", residual " + fmt("%.2e", worst_res) + ", direct " +
              fmt("%.2e", worst_direct) + ", sup|W|/W0 " + fmt("%.3f", worst_ratio) + ", eps*u/v0 " +
              fmt("%.3f", worst_trunc) + ", spin leaks " + std::to_string(spin_leaks) + ", " + fmt("%.1f", sec) + " s"};
}

Verdict transform_round_trip() {
  std::mt19937_64 rng(1009);
  double e1 = 0.0, e2 = 0.0;
  for (int t = 0; t < 10000; ++t) {
    const double n0 = uniform(rng, 0.1, 5.0), W0 = uniform(rng, 0.1, 5.0);
    const Vec3 Wv = random_unit(rng) * uniform(rng, 0.0, 0.99) * W0;
    const Model2Point p = transform_forward(n0, W0, Wv);
    const MomentPoint back = transform_inverse(p.u, p.v0, p.vv);
    e1 = std::max({e1, std::abs(back.n0 - n0) / n0, std::abs(back.W0 - W0) / W0, (back.Wv - Wv).norm() / W0});

    const double u = uniform(rng, 0.1, 5.0), v0 = uniform(rng, 0.1, 5.0);
    const Vec3 vv = random_unit(rng) * uniform(rng, 0.0, 0.99) * v0;
    const MomentPoint mi = transform_inverse(u, v0, vv);
    const Model2Point again = transform_forward(mi.n0, mi.W0, mi.Wv);
    e2 = std::max({e2, std::abs(again.u - u) / u, std::abs(again.v0 - v0) / v0, (again.vv - vv).norm() / v0});
  }
  return {std::max(e1, e2) <= 1e-10, "forward-inverse " + fmt("%.2e", e1) + ", inverse-forward " + fmt("%.2e", e2)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"pauli algebra", pauli_algebra},
      {"moment closures", moment_closures},
      {"coefficient bounds", coefficient_bounds},
      {"entropy monotonicity", entropy_monotonicity},
      {"p = 0 degeneracy", degeneracy},
      {"three-layer steady state", three_layer_structure},
      {"polarization sweeps", polarization_sweeps},
      {"model-2 time step", model2_solver},
      {"transform round trip", transform_round_trip},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int n = std::atoi(argv[i]);
    if (n < 1 || n > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "usage: %s [criterion 1-%zu ...]\n", argv[0], criteria.size());
      return 1;
    }
    selected.insert(n);
  }
  bool all_pass = true;
  for (int n = 1; n <= static_cast<int>(criteria.size()); ++n) {
    if (!selected.empty() && !selected.count(n)) continue;
    Verdict v;
    try {
      v = criteria[n - 1].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    all_pass = all_pass && v.pass;
    std::printf("%s %d %s: %s\n", v.pass ? "PASS" : "FAIL", n, criteria[n - 1].first.c_str(), v.detail.c_str());
    std::fflush(stdout);
  }
  return all_pass ? 0 : 1;
}
