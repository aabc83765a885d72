#ifndef SPINET_PAULI_HPP
#define SPINET_PAULI_HPP

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace spinet {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Hermitian 2x2 matrix s0*sigma_0 + sv.sigma stored in Pauli coordinates.
struct PauliVec {
  double s0 = 0.0;
  Vec3 sv = Vec3::Zero();

  PauliVec() = default;
  PauliVec(double scalar, const Vec3& vector) : s0(scalar), sv(vector) {}

  double eig_plus() const { return s0 + sv.norm(); }
  double eig_minus() const { return s0 - sv.norm(); }
  bool positive_definite() const { return s0 > sv.norm(); }

  PauliVec operator+(const PauliVec& o) const { return {s0 + o.s0, sv + o.sv}; }
  PauliVec operator-(const PauliVec& o) const { return {s0 - o.s0, sv - o.sv}; }
  PauliVec operator*(double a) const { return {a * s0, a * sv}; }
};

/// Product a*b split as hermitian_part + i*(skew.sigma).
struct PauliProduct {
  PauliVec hermitian;
  Vec3 skew = Vec3::Zero();
};

PauliProduct pauli_mul(const PauliVec& a, const PauliVec& b);

/// sinh(r)/r, with a series branch near the removable singularity.
double sinhc(double r);

/// Matrix exponential. Throws std::overflow_error if a0 + |av| leaves the
/// range of exp.
PauliVec pauli_exp(const PauliVec& a);

/// Spectral calculus f(M) = f(M+)P+ + f(M-)P-.
///
/// Throws std::domain_error if f returns a non-finite value at either
/// eigenvalue.
template <class F>
PauliVec pauli_fn(F&& f, const PauliVec& m) {
  const double r = m.sv.norm();
  if (r == 0.0) {
    const double v = f(m.s0);
    if (!std::isfinite(v)) throw std::domain_error("pauli_fn: f undefined at eigenvalue " + std::to_string(m.s0));
    return {v, Vec3::Zero()};
  }
  const double fp = f(m.s0 + r);
  const double fm = f(m.s0 - r);
  if (!std::isfinite(fp) || !std::isfinite(fm))
    throw std::domain_error("pauli_fn: f undefined at an eigenvalue of the argument");
  return {0.5 * (fp + fm), (0.5 * (fp - fm) / r) * m.sv};
}

/// Matrix logarithm; requires a positive-definite argument.
PauliVec pauli_log(const PauliVec& m);

enum class Congruence {
  forward,  ///< A -> P^{-1/2} A P^{-1/2}
  inverse,  ///< A -> P^{1/2} A P^{1/2}
};

/// Congruence by the polarization matrix P = sigma_0 + p*omega.sigma.
///
/// The forward map is the Pauli-coordinate matrix
///   eta^-2 [[1, -p omega^T], [-p omega, (1-eta) omega omega^T + eta I]],
/// eta = sqrt(1-p^2), which equals P^{-1/2} A P^{-1/2}. Requires |omega| = 1
/// and 0 <= p < 1.
PauliVec polarization_congruence(const PauliVec& a, const Vec3& omega, double p,
                                 Congruence direction = Congruence::forward);

/// Same linear map as the forward congruence but without the unit-length
/// check on omega. Face-averaged magnetizations at junctions are not unit
/// vectors; the discrete fluxes apply this formula to them unchanged.
PauliVec polarization_map(const PauliVec& a, const Vec3& omega, double p);

}  // namespace spinet

#endif
