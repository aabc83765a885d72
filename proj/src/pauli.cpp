#include "spinet/pauli.hpp"

#include <limits>

namespace spinet {

PauliProduct pauli_mul(const PauliVec& a, const PauliVec& b) {
  PauliProduct out;
  out.hermitian.s0 = a.s0 * b.s0 + a.sv.dot(b.sv);
  out.hermitian.sv = a.s0 * b.sv + b.s0 * a.sv;
  out.skew = a.sv.cross(b.sv);
  return out;
}

double sinhc(double r) {
  r = std::abs(r);
  if (r < 1e-4) {
    const double r2 = r * r;
    return 1.0 + r2 / 6.0 * (1.0 + r2 / 20.0);
  }
  return std::sinh(r) / r;
}

PauliVec pauli_exp(const PauliVec& a) {
  static const double max_arg = std::log(std::numeric_limits<double>::max());
  const double r = a.sv.norm();
  if (!(a.s0 + r < max_arg)) throw std::overflow_error("pauli_exp: argument exceeds the range of exp");
  const double e = std::exp(a.s0);
  return {e * std::cosh(r), (e * sinhc(r)) * a.sv};
}

PauliVec pauli_log(const PauliVec& m) {
  if (!(m.eig_minus() > 0.0)) throw std::domain_error("pauli_log: argument is not positive definite");
  return pauli_fn([](double x) { return std::log(x); }, m);
}

PauliVec polarization_map(const PauliVec& a, const Vec3& omega, double p) {
  if (!(p >= 0.0 && p < 1.0)) throw std::invalid_argument("polarization must lie in [0,1)");
  const double eta = std::sqrt(1.0 - p * p);
  const double inv_eta2 = 1.0 / (1.0 - p * p);
  const double proj = omega.dot(a.sv);
  PauliVec b;
  b.s0 = inv_eta2 * (a.s0 - p * proj);
  b.sv = inv_eta2 * (-p * a.s0 * omega + (1.0 - eta) * proj * omega + eta * a.sv);
  return b;
}

PauliVec polarization_congruence(const PauliVec& a, const Vec3& omega, double p, Congruence direction) {
  if (std::abs(omega.norm() - 1.0) > 1e-12) throw std::invalid_argument("polarization_congruence: omega must be a unit vector");
  if (!(p >= 0.0 && p < 1.0)) throw std::invalid_argument("polarization_congruence: p must lie in [0,1)");
  if (direction == Congruence::forward) return polarization_map(a, omega, p);
  // P^{1/2} A P^{1/2}: same block structure with +p and no eta^-2 prefactor.
  const double eta = std::sqrt(1.0 - p * p);
  const double proj = omega.dot(a.sv);
  PauliVec b;
  b.s0 = a.s0 + p * proj;
  b.sv = p * a.s0 * omega + (1.0 - eta) * proj * omega + eta * a.sv;
  return b;
}

}  // namespace spinet
