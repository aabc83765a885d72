#ifndef SPINET_FVM_HPP
#define SPINET_FVM_HPP

#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinet/device.hpp"
#include "spinet/entropy.hpp"

namespace spinet {

struct SimState {
  std::vector<double> n0;
  std::vector<Vec3> nv;
  std::vector<double> W0;
  std::vector<double> T;
  std::vector<double> V;
  long time_step_index = 0;

  int size() const { return static_cast<int>(n0.size()); }
};

enum class Mode { energy_transport, drift_diffusion };
enum class Boundary { dirichlet, zero_flux };

struct SchemeParams {
  double D0 = 6.9e-4;
  double debye_sq = 1.2e-4;
  double gamma = 4.0;
  double tau_sf = 1.0;  ///< infinity disables spin-flip relaxation
  double V_left = 0.0;
  double V_right = 0.0;
  Mode mode = Mode::energy_transport;
  Boundary boundary = Boundary::dirichlet;
  /// false selects the model without polarization matrix, ignoring p.
  bool polarized = true;
  /// false keeps V fixed at the value carried by the state; the contacts
  /// keep V_left and V_right.
  bool solve_field = true;
};

SchemeParams scheme_params(const DeviceProfile& profile, Mode mode = Mode::energy_transport);

/// Raised by step() when the new state has n0 <= 0 or T <= 0, or a face has
/// eta < 1e-6.
class StepFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// -(debye_sq/dx) sum_sigma w D V = dx (n0 - C) with Dirichlet data at both
/// ends; w = 2 on the two boundary faces.
std::vector<double> solve_poisson(const std::vector<double>& n0, const std::vector<double>& C, double debye_sq,
                                  double dx, double V_left, double V_right);

/// J_{u,K,sigma} across interior face `face` (between cells face-1 and
/// face), oriented out of cell face-1. Diffusion uses u_diff, drift uses
/// u_drift.
double discrete_flux(const std::vector<double>& u_diff, const std::vector<double>& u_drift,
                     const std::vector<double>& T, const std::vector<double>& V, int face, double dx);
inline double discrete_flux(const std::vector<double>& u, const std::vector<double>& T, const std::vector<double>& V,
                            int face, double dx) {
  return discrete_flux(u, u, T, V, face, dx);
}

/// n0 = C, T = 1, nv = 0, V from one Poisson solve (or 0 without field).
SimState initial_state(const DeviceGrid& grid, const SchemeParams& params);

SimState step(const SimState& prev, const DeviceGrid& grid, const SchemeParams& params, double dt);

/// max over cells of |n0|, |nv|_inf, |T| differences.
double state_difference(const SimState& a, const SimState& b);

struct SteadyOptions {
  double dt = 5e-4;
  double threshold = 1e-8;
  long max_steps = 4'000'000;
  double min_dt = 1e-10;
};

struct ConvergenceReport {
  bool converged = false;
  long steps = 0;
  double final_residual = std::numeric_limits<double>::infinity();
  double final_dt = 0.0;
  int dt_halvings = 0;
  std::vector<double> residuals;
};

struct SteadyResult {
  SimState state;
  ConvergenceReport report;
};

/// Steps from initial_state until the max-norm difference of consecutive
/// states drops below the threshold. A StepFailure halves dt. Throws
/// std::invalid_argument for a threshold outside [1e-12, 1e-4].
SteadyResult steady_state(const DeviceGrid& grid, const SchemeParams& params, const SteadyOptions& options,
                          const std::function<void(long, double)>& progress = {});

struct EntropyRunOptions {
  int m = 200;
  long steps = 2000;
  double dt = 1e-5;
  double D0 = 1.0;
  double tau_sf = 1.0;
  double tolerance = 1e-10;
};

struct EntropyTrajectory {
  EntropyReport report;
  std::vector<double> mass;  ///< sum n0 dx after each step
  double max_mass_drift = 0.0;
};

/// Smooth positive perturbation of the uniform state (n0 = 1, T = 1,
/// nv = 0) built from a few random Fourier modes.
SimState perturbed_uniform_state(int m, unsigned seed, double amplitude = 0.2);

/// Field-free, zero-flux, unpolarized run from `initial` recording H1 and
/// the discrete production after every step.
EntropyTrajectory entropy_trajectory_run(const SimState& initial, const EntropyRunOptions& options);

}  // namespace spinet

#endif
