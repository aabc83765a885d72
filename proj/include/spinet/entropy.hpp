#ifndef SPINET_ENTROPY_HPP
#define SPINET_ENTROPY_HPP

#include <limits>
#include <vector>

#include "spinet/closures.hpp"

namespace spinet {

/// sum_K [n+ log(n+ T^{-3/2}) + n- log(n- T^{-3/2})] dx, n+- = n0 +- |nv|.
double entropy_H1(const std::vector<double>& n0, const std::vector<Vec3>& nv, const std::vector<double>& T, double dx);

/// (5/2) sum_K n0 log(n0 / (W+^{3/5} + W-^{3/5})) dx, W+- = W0 +- |Wv|.
double entropy_H2(const std::vector<double>& n0, const std::vector<double>& W0, const std::vector<Vec3>& Wv, double dx);

double entropy_H3(const std::vector<double>& np, const std::vector<double>& nm, const std::vector<double>& Tp,
                  const std::vector<double>& Tm, double dx);

/// Discrete production terms of the first model on interior faces.
struct ProductionTerms {
  double branch_gradient = 0.0;  ///< 4 sum |D sqrt(n+- T)|^2 / dx
  double temperature = 0.0;      ///< 20 sum n0_face |D sqrt(T)|^2 / dx
  double spin_exchange = 0.0;    ///< 1/2 sum (n+-n-)log(n+/n-)_face T_face |D s|^2 / dx
  double relaxation = 0.0;       ///< 1/2 sum_K (n+-n-)log(n+/n-) dx / tau_sf

  double total() const { return branch_gradient + temperature + spin_exchange + relaxation; }
};

/// Gradient terms are multiplied by D0. Cells with |nv| < 1e-14 give no
/// contribution to the spin_exchange term.
ProductionTerms entropy_production_1_terms(const std::vector<double>& n0, const std::vector<Vec3>& nv,
                                           const std::vector<double>& T, double dx, double D0 = 1.0,
                                           double tau_sf = std::numeric_limits<double>::infinity());
double entropy_production_1(const std::vector<double>& n0, const std::vector<Vec3>& nv, const std::vector<double>& T,
                            double dx, double D0 = 1.0, double tau_sf = std::numeric_limits<double>::infinity());

struct EntropySample {
  long step = 0;
  double H = 0.0;
  double production = 0.0;
};

struct EntropyReport {
  std::vector<EntropySample> series;
  bool monotone_nonincreasing = true;
  double max_violation = 0.0;
  double tolerance = 0.0;
};

/// Fills max_violation = max(0, max_k H_{k+1} - H_k) and the verdict.
/// Throws std::invalid_argument for fewer than two samples.
EntropyReport monotonicity_verdict(std::vector<EntropySample> series, double tolerance);
EntropyReport monotonicity_verdict(const std::vector<double>& H, double tolerance);

/// int tr(M log M) dk of the Maxwellian by radial quadrature, with the
/// trace taken over the two eigenvalues of M pointwise.
double kinetic_entropy_by_quadrature(const LagrangeParams& params, double rel_tol = 1e-10);

}  // namespace spinet

#endif
