#include "spinet/fvm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "spinet/banded.hpp"

namespace spinet {

namespace {

// Face i joins cell i-1 (left) and cell i (right). Oriented face fluxes
// F_i point from left to right, so cell K loses F_{K+1} - F_K.
struct FaceGeom {
  int m;
  bool dirichlet;

  int nfaces() const { return m + 1; }
  bool active(int i) const { return dirichlet || (i > 0 && i < m); }
  double weight(int i) const { return (i == 0 || i == m) ? 2.0 : 1.0; }
};

// Boundary data of a scalar or vector field at the two contacts.
template <class T>
struct Ghost {
  T left, right;
};

template <class T>
T left_value(const std::vector<T>& u, int i, const Ghost<T>& g) {
  return i == 0 ? g.left : u[i - 1];
}

template <class T>
T right_value(const std::vector<T>& u, int i, const Ghost<T>& g, int m) {
  return i == m ? g.right : u[i];
}

// F_i = aL_i u_left - aR_i u_right + b_i for the implicit unknown u.
struct ScalarFaceCoeffs {
  std::vector<double> aL, aR, b;
  explicit ScalarFaceCoeffs(int n) : aL(n, 0.0), aR(n, 0.0), b(n, 0.0) {}
};

struct VectorFaceCoeffs {
  std::vector<Mat3> AL, AR;
  std::vector<Vec3> b;
  explicit VectorFaceCoeffs(int n) : AL(n, Mat3::Zero()), AR(n, Mat3::Zero()), b(n, Vec3::Zero()) {}
};

// Raw two-point flux with explicit data on face i.
template <class T>
T raw_flux(const std::vector<T>& u_diff, const std::vector<T>& u_drift, const std::vector<double>& temp,
           const std::vector<double>& V, int i, const FaceGeom& fg, const Ghost<T>& gu, const Ghost<double>& gT,
           const Ghost<double>& gV, double dx) {
  const int m = fg.m;
  const T uL = left_value(u_diff, i, gu), uR = right_value(u_diff, i, gu, m);
  const T dL = left_value(u_drift, i, gu), dR = right_value(u_drift, i, gu, m);
  const double TL = left_value(temp, i, gT), TR = right_value(temp, i, gT, m);
  const double dV = right_value(V, i, gV, m) - left_value(V, i, gV);
  return -(fg.weight(i) / dx) * ((uR * TR - uL * TL) + 0.5 * (dL + dR) * dV);
}

double potential_jump(const std::vector<double>& V, int i, const FaceGeom& fg, const Ghost<double>& gV) {
  return right_value(V, i, gV, fg.m) - left_value(V, i, gV);
}

Tridiagonal assemble_scalar(const ScalarFaceCoeffs& f, int m, double mass, const std::vector<double>& old,
                            std::vector<double>& rhs) {
  Tridiagonal a(m);
  rhs.assign(m, 0.0);
  for (int k = 0; k < m; ++k) {
    a.diag[k] = mass + f.aL[k + 1] + f.aR[k];
    if (k + 1 < m) a.upper[k] = -f.aR[k + 1];
    if (k > 0) a.lower[k] = -f.aL[k];
    rhs[k] = mass * old[k] - f.b[k + 1] + f.b[k];
  }
  return a;
}

Mat3 cross_matrix(const Vec3& w) {
  Mat3 c;
  c << 0.0, -w[2], w[1], w[2], 0.0, -w[0], -w[1], w[0], 0.0;
  return c;
}

void check_positive(const SimState& s) {
  for (int k = 0; k < s.size(); ++k) {
    if (!(s.n0[k] > 0.0)) throw StepFailure("step: n0 <= 0 in cell " + std::to_string(k));
    if (!(s.T[k] > 0.0)) throw StepFailure("step: T <= 0 in cell " + std::to_string(k));
  }
}

}  // namespace

SchemeParams scheme_params(const DeviceProfile& profile, Mode mode) {
  SchemeParams p;
  p.D0 = profile.D0;
  p.debye_sq = profile.debye_sq;
  p.gamma = profile.gamma;
  p.tau_sf = profile.tau_sf_scaled;
  p.V_left = 0.0;
  p.V_right = profile.scaled_bias();
  p.mode = mode;
  return p;
}

std::vector<double> solve_poisson(const std::vector<double>& n0, const std::vector<double>& C, double debye_sq,
                                  double dx, double V_left, double V_right) {
  if (!(debye_sq > 0.0)) throw std::invalid_argument("solve_poisson: debye_sq must be positive");
  if (n0.size() != C.size()) throw std::invalid_argument("solve_poisson: array sizes differ");
  const int m = static_cast<int>(n0.size());
  if (m < 1) throw std::invalid_argument("solve_poisson: empty grid");
  const double c = debye_sq / dx;
  Tridiagonal a(m);
  std::vector<double> rhs(m);
  for (int k = 0; k < m; ++k) {
    const double wl = k == 0 ? 2.0 : 1.0, wr = k == m - 1 ? 2.0 : 1.0;
    a.diag[k] = c * (wl + wr);
    if (k > 0) a.lower[k] = -c;
    if (k + 1 < m) a.upper[k] = -c;
    rhs[k] = dx * (n0[k] - C[k]);
  }
  rhs[0] += 2.0 * c * V_left;
  rhs[m - 1] += 2.0 * c * V_right;
  return solve_tridiagonal(a, rhs);
}

double discrete_flux(const std::vector<double>& u_diff, const std::vector<double>& u_drift,
                     const std::vector<double>& T, const std::vector<double>& V, int face, double dx) {
  const int m = static_cast<int>(u_diff.size());
  if (face < 1 || face >= m) throw std::invalid_argument("discrete_flux: face must be interior");
  const FaceGeom fg{m, false};
  return raw_flux(u_diff, u_drift, T, V, face, fg, Ghost<double>{0.0, 0.0}, Ghost<double>{1.0, 1.0},
                  Ghost<double>{0.0, 0.0}, dx);
}

SimState initial_state(const DeviceGrid& grid, const SchemeParams& params) {
  SimState s;
  s.n0 = grid.C;
  s.nv.assign(grid.m, Vec3::Zero());
  s.T.assign(grid.m, 1.0);
  s.W0.resize(grid.m);
  for (int k = 0; k < grid.m; ++k) s.W0[k] = 1.5 * s.n0[k];
  s.V = params.solve_field ? solve_poisson(s.n0, grid.C, params.debye_sq, grid.dx, params.V_left, params.V_right)
                           : std::vector<double>(grid.m, 0.0);
  return s;
}

SimState step(const SimState& prev, const DeviceGrid& grid, const SchemeParams& params, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  const int m = grid.m;
  if (prev.size() != m) throw std::invalid_argument("step: state does not match grid");
  const double dx = grid.dx;
  const FaceGeom fg{m, params.boundary == Boundary::dirichlet};
  const int nf = fg.nfaces();

  std::vector<double> inv_eta2(nf, 1.0);
  if (params.polarized) {
    for (int i = 0; i < nf; ++i) {
      if (!(grid.eta_face[i] >= 1e-6)) throw StepFailure("step: eta below 1e-6 at face " + std::to_string(i));
      inv_eta2[i] = 1.0 / (grid.eta_face[i] * grid.eta_face[i]);
    }
  }

  const Ghost<double> gn{1.0, 1.0}, gT{1.0, 1.0}, gW{1.5, 1.5};
  const Ghost<Vec3> gnv{Vec3::Zero(), Vec3::Zero()};

  SimState next;
  next.time_step_index = prev.time_step_index + 1;

  // (1) potential from the previous charge density
  next.V = params.solve_field ? solve_poisson(prev.n0, grid.C, params.debye_sq, dx, params.V_left, params.V_right)
                              : prev.V;
  const Ghost<double> gV{params.V_left, params.V_right};
  const std::vector<double>& V = next.V;

  // Spin fluxes with explicit data, shared by the n0 step.
  std::vector<Vec3> Jvec_old(nf, Vec3::Zero());
  if (params.polarized)
    for (int i = 0; i < nf; ++i)
      if (fg.active(i)) Jvec_old[i] = raw_flux(prev.nv, prev.nv, prev.T, V, i, fg, gnv, gT, gV, dx);

  // (2) charge density
  ScalarFaceCoeffs fn(nf);
  for (int i = 0; i < nf; ++i) {
    if (!fg.active(i)) continue;
    const double w = fg.weight(i);
    const double c = params.D0 * inv_eta2[i] * w / dx;
    const double TL = left_value(prev.T, i, gT), TR = right_value(prev.T, i, gT, m);
    const double drift = -(w / dx) * 0.5 * (left_value(prev.n0, i, gn) + right_value(prev.n0, i, gn, m)) *
                         potential_jump(V, i, fg, gV);
    double b = params.D0 * inv_eta2[i] * drift;
    if (params.polarized) b -= params.D0 * inv_eta2[i] * grid.p_face[i] * grid.omega_face[i].dot(Jvec_old[i]);
    fn.aL[i] = c * TL;
    fn.aR[i] = c * TR;
    if (i == 0) {
      b += fn.aL[i] * gn.left;
      fn.aL[i] = 0.0;
    }
    if (i == m) {
      b -= fn.aR[i] * gn.right;
      fn.aR[i] = 0.0;
    }
    fn.b[i] = b;
  }
  std::vector<double> rhs;
  next.n0 = solve_tridiagonal(assemble_scalar(fn, m, dx / dt, prev.n0, rhs), rhs);

  // Raw and polarized charge fluxes at the new density.
  std::vector<double> Jn(nf, 0.0), Fn(nf, 0.0);
  for (int i = 0; i < nf; ++i) {
    if (!fg.active(i)) continue;
    Jn[i] = raw_flux(next.n0, prev.n0, prev.T, V, i, fg, gn, gT, gV, dx);
    Fn[i] = params.D0 * inv_eta2[i] * Jn[i];
    if (params.polarized) Fn[i] -= params.D0 * inv_eta2[i] * grid.p_face[i] * grid.omega_face[i].dot(Jvec_old[i]);
  }

  // (3) energy density
  if (params.mode == Mode::energy_transport) {
    std::vector<Vec3> Wv_old(m);
    for (int k = 0; k < m; ++k) Wv_old[k] = 1.5 * prev.T[k] * prev.nv[k];
    ScalarFaceCoeffs fw(nf);
    std::vector<double> joule_face(nf, 0.0);
    for (int i = 0; i < nf; ++i) {
      if (!fg.active(i)) continue;
      const double w = fg.weight(i);
      const double pre = (5.0 / 3.0) * params.D0 * inv_eta2[i];
      const double c = pre * w / dx;
      const double dV = potential_jump(V, i, fg, gV);
      const double drift = -(w / dx) * 0.5 * (left_value(prev.W0, i, gW) + right_value(prev.W0, i, gW, m)) * dV;
      double b = pre * drift;
      if (params.polarized) {
        const Vec3 JW = raw_flux(Wv_old, Wv_old, prev.T, V, i, fg, gnv, gT, gV, dx);
        b -= pre * grid.p_face[i] * grid.omega_face[i].dot(JW);
      }
      fw.aL[i] = c * left_value(prev.T, i, gT);
      fw.aR[i] = c * right_value(prev.T, i, gT, m);
      if (i == 0) {
        b += fw.aL[i] * gW.left;
        fw.aL[i] = 0.0;
      }
      if (i == m) {
        b -= fw.aR[i] * gW.right;
        fw.aR[i] = 0.0;
      }
      fw.b[i] = b;
      joule_face[i] = w * Fn[i] * dV;
    }
    Tridiagonal a = assemble_scalar(fw, m, dx / dt, prev.W0, rhs);
    for (int k = 0; k < m; ++k) rhs[k] -= 0.5 * (joule_face[k] + joule_face[k + 1]);
    next.W0 = solve_tridiagonal(a, rhs);
    next.T.resize(m);
    for (int k = 0; k < m; ++k) next.T[k] = (2.0 / 3.0) * next.W0[k] / next.n0[k];
  } else {
    next.T.assign(m, 1.0);
    next.W0.resize(m);
    for (int k = 0; k < m; ++k) next.W0[k] = 1.5 * next.n0[k];
  }

  // (4) spin-vector density
  VectorFaceCoeffs fv(nf);
  for (int i = 0; i < nf; ++i) {
    if (!fg.active(i)) continue;
    const double w = fg.weight(i);
    const double pre = params.D0 * inv_eta2[i];
    Mat3 M = Mat3::Identity();
    if (params.polarized) {
      const double eta = grid.eta_face[i];
      const Vec3& om = grid.omega_face[i];
      M = (1.0 - eta) * om * om.transpose() + eta * Mat3::Identity();
    }
    const double dV = potential_jump(V, i, fg, gV);
    const Vec3 drift = -(w / dx) * 0.5 * (left_value(prev.nv, i, gnv) + right_value(prev.nv, i, gnv, m)) * dV;
    Vec3 b = pre * (M * drift);
    if (params.polarized) b -= pre * grid.p_face[i] * Jn[i] * grid.omega_face[i];
    fv.AL[i] = (pre * w / dx * left_value(prev.T, i, gT)) * M;
    fv.AR[i] = (pre * w / dx * right_value(prev.T, i, gT, m)) * M;
    if (i == 0) fv.AL[i].setZero();  // zero boundary spin density
    if (i == m) fv.AR[i].setZero();
    fv.b[i] = b;
  }
  BlockTridiagonal A(m);
  std::vector<Vec3> vrhs(m);
  const double relax = std::isfinite(params.tau_sf) ? dx / params.tau_sf : 0.0;
  for (int k = 0; k < m; ++k) {
    A.diag[k] = (dx / dt + relax) * Mat3::Identity() + params.gamma * dx * cross_matrix(grid.omega[k]) +
                fv.AL[k + 1] + fv.AR[k];
    if (k + 1 < m) A.upper[k] = -fv.AR[k + 1];
    if (k > 0) A.lower[k] = -fv.AL[k];
    vrhs[k] = (dx / dt) * prev.nv[k] - fv.b[k + 1] + fv.b[k];
  }
  next.nv = solve_block_tridiagonal(A, vrhs);

  check_positive(next);
  return next;
}

double state_difference(const SimState& a, const SimState& b) {
  double r = 0.0;
  for (int k = 0; k < a.size(); ++k) {
    r = std::max(r, std::abs(a.n0[k] - b.n0[k]));
    r = std::max(r, (a.nv[k] - b.nv[k]).lpNorm<Eigen::Infinity>());
    r = std::max(r, std::abs(a.T[k] - b.T[k]));
  }
  return r;
}

SteadyResult steady_state(const DeviceGrid& grid, const SchemeParams& params, const SteadyOptions& options,
                          const std::function<void(long, double)>& progress) {
  if (!(options.threshold >= 1e-12 && options.threshold <= 1e-4))
    throw std::invalid_argument("steady_state: threshold must lie in [1e-12, 1e-4]");
  if (!(options.dt > 0.0)) throw std::invalid_argument("steady_state: dt must be positive");
  SteadyResult out;
  out.state = initial_state(grid, params);
  double dt = options.dt;
  ConvergenceReport& rep = out.report;
  while (rep.steps < options.max_steps) {
    SimState next;
    try {
      next = step(out.state, grid, params, dt);
    } catch (const StepFailure&) {
      dt *= 0.5;
      ++rep.dt_halvings;
      if (dt < options.min_dt) throw;
      continue;
    }
    const double r = state_difference(next, out.state);
    out.state = std::move(next);
    ++rep.steps;
    rep.residuals.push_back(r);
    rep.final_residual = r;
    if (progress) progress(rep.steps, r);
    if (r < options.threshold) {
      rep.converged = true;
      break;
    }
  }
  rep.final_dt = dt;
  return out;
}

SimState perturbed_uniform_state(int m, unsigned seed, double amplitude) {
  if (m < 3) throw std::invalid_argument("perturbed_uniform_state: m must be at least 3");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  constexpr int modes = 4;
  double an[modes], at[modes], as[3][modes];
  for (int j = 0; j < modes; ++j) {
    an[j] = unit(rng) / (j + 1);
    at[j] = unit(rng) / (j + 1);
    for (auto& c : as) c[j] = unit(rng) / (j + 1);
  }
  SimState s;
  s.n0.resize(m);
  s.T.resize(m);
  s.nv.resize(m);
  s.W0.resize(m);
  s.V.assign(m, 0.0);
  const double scale = amplitude / 2.1;  // sum of 1/(j+1), j < 4, bounds the mode sum
  for (int k = 0; k < m; ++k) {
    const double x = (k + 0.5) / m;
    double pn = 0.0, pt = 0.0;
    Vec3 ps = Vec3::Zero();
    for (int j = 0; j < modes; ++j) {
      const double c = std::cos(std::numbers::pi * (j + 1) * x);
      pn += an[j] * c;
      pt += at[j] * c;
      for (int d = 0; d < 3; ++d) ps[d] += as[d][j] * c;
    }
    s.n0[k] = 1.0 + scale * pn;
    s.T[k] = 1.0 + scale * pt;
    s.nv[k] = (scale / std::sqrt(3.0)) * ps;
    s.W0[k] = 1.5 * s.n0[k] * s.T[k];
  }
  return s;
}

EntropyTrajectory entropy_trajectory_run(const SimState& initial, const EntropyRunOptions& options) {
  const int m = initial.size();
  if (m != options.m) throw std::invalid_argument("entropy_trajectory_run: state size differs from options.m");
  DeviceGrid grid;
  grid.m = m;
  grid.dx = 1.0 / m;
  grid.C.assign(m, 1.0);
  grid.omega.assign(m, Vec3::Zero());
  grid.p.assign(m, 0.0);
  grid.omega_face.assign(m + 1, Vec3::Zero());
  grid.p_face.assign(m + 1, 0.0);
  grid.eta_face.assign(m + 1, 1.0);

  SchemeParams params;
  params.D0 = options.D0;
  params.tau_sf = options.tau_sf;
  params.gamma = 0.0;
  params.boundary = Boundary::zero_flux;
  params.solve_field = false;
  params.polarized = false;

  auto mass_of = [&](const SimState& s) {
    double sum = 0.0;
    for (double v : s.n0) sum += v;
    return sum * grid.dx;
  };

  EntropyTrajectory out;
  std::vector<EntropySample> series;
  SimState s = initial;
  s.V.assign(m, 0.0);
  series.push_back({0, entropy_H1(s.n0, s.nv, s.T, grid.dx),
                    entropy_production_1(s.n0, s.nv, s.T, grid.dx, options.D0, options.tau_sf)});
  out.mass.push_back(mass_of(s));
  for (long k = 1; k <= options.steps; ++k) {
    s = step(s, grid, params, options.dt);
    series.push_back({k, entropy_H1(s.n0, s.nv, s.T, grid.dx),
                      entropy_production_1(s.n0, s.nv, s.T, grid.dx, options.D0, options.tau_sf)});
    out.mass.push_back(mass_of(s));
    out.max_mass_drift = std::max(out.max_mass_drift, std::abs(out.mass[k] - out.mass[k - 1]));
  }
  out.report = monotonicity_verdict(std::move(series), options.tolerance);
  return out;
}

}  // namespace spinet
