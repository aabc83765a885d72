#ifndef SPINET_MODEL2_ELLIPTIC_HPP
#define SPINET_MODEL2_ELLIPTIC_HPP

#include <limits>
#include <string>
#include <vector>

#include "spinet/pauli.hpp"

namespace spinet {

struct Model2Point {
  double u = 0.0;
  double v0 = 0.0;
  Vec3 vv = Vec3::Zero();
};

struct MomentPoint {
  double n0 = 0.0;
  double W0 = 0.0;
  Vec3 Wv = Vec3::Zero();
};

/// u = (2/3) W0, (v0, vv) = (Z0, Zv). Requires n0 > 0 and W0 > |Wv|.
Model2Point transform_forward(double n0, double W0, const Vec3& Wv);
/// Requires u > 0 and v0 > |vv|. Cells with |vv| < 1e-14 map to Wv = 0.
MomentPoint transform_inverse(double u, double v0, const Vec3& vv);

struct LambdaMu {
  double lambda;
  double mu;
};

/// Requires xi >= 0 and vp >= vm >= 0 with vp > 0.
LambdaMu lambda_mu(double xi, double vp, double vm, double h, double tau_sf);

/// 0 below 0, identity on (0, 1/eps], 1/eps above.
double truncation(double f, double eps);

struct Model2State {
  std::vector<double> n0;
  std::vector<double> W0;
  std::vector<Vec3> Wv;

  int size() const { return static_cast<int>(n0.size()); }
};

struct Model2Boundary {
  MomentPoint left;
  MomentPoint right;
};

enum class SpinSource {
  lagged_coefficient,  ///< (c - h Lap) v = W^0 with c = mu nu0 / |nu| from the iterate
  explicit_source,     ///< -h Lap v = W^0 - mu nu0 nu/|nu|
};

struct Model2Options {
  double damping = 0.5;
  double min_damping = 1.0 / 64.0;
  double tol = 1e-12;
  int max_iter = 5000;
  /// <= 0 selects min(inf W0^0/n0^0, 1/sup(u^D/v0^D)).
  double eps_trunc = 0.0;
  SpinSource spin_source = SpinSource::lagged_coefficient;
};

struct Model2Certificate {
  double residual = std::numeric_limits<double>::infinity();
  double min_n0 = 0.0;
  double min_W0 = 0.0;
  double min_W0_over_n0 = 0.0;
  double min_v_margin = 0.0;       ///< min(v0 - |vv|)
  double truncation_ratio = 0.0;   ///< max(u/v0) * eps, <= 1 when inactive
  double min_u_over_v0 = 0.0;
  double sup_W_ratio = 0.0;        ///< sup |Wv| / W0
  double margin = 0.0;             ///< 1 - sup_W_ratio
  double direct_residual = 0.0;    ///< max-norm residual of the moment equations
  double eps = 0.0;
  double H2_prev = 0.0;
  double H2 = 0.0;

  /// Names of the violated bounds; empty when clean.
  std::vector<std::string> violations() const;
  bool clean() const { return violations().empty(); }
};

enum class Model2Status { converged, not_converged, certificate_violation };

struct Model2Result {
  Model2Status status = Model2Status::not_converged;
  Model2State state;
  Model2Certificate certificate;
  int iterations = 0;
  std::vector<double> residual_trace;
  double final_damping = 0.0;
};

/// Throws std::invalid_argument naming the first offending cell if the
/// previous state or the boundary data violates the hypotheses.
void check_model2_admissible(const Model2State& prev, const Model2Boundary& bc);

/// One step of the time-discrete second model on m equal cells of [0,1]
/// with Dirichlet data on the two end faces.
Model2Result solve_time_step(const Model2State& prev, double h, double tau_sf, const Model2Boundary& bc,
                             const Model2Options& options = {});

/// Residual of the moment equations assembled directly from (n0, W0, Wv).
double model2_direct_residual(const Model2State& prev, const Model2State& next, double h, double tau_sf,
                              const Model2Boundary& bc);

}  // namespace spinet

#endif
