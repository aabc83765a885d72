#ifndef SPINET_TESTS_SUPPORT_HPP
#define SPINET_TESTS_SUPPORT_HPP

#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>

#include "spinet/model2_elliptic.hpp"
#include "spinet/pauli.hpp"

namespace spinet::testing {

using Mat2c = Eigen::Matrix2cd;

inline Mat2c to_matrix(const PauliVec& a) {
  using C = std::complex<double>;
  Mat2c m;
  m << C(a.s0 + a.sv[2], 0.0), C(a.sv[0], -a.sv[1]), C(a.sv[0], a.sv[1]), C(a.s0 - a.sv[2], 0.0);
  return m;
}

/// Pauli coordinates of an arbitrary 2x2 matrix: c_j = tr(sigma_j m)/2.
struct PauliCoords {
  std::complex<double> c0;
  Eigen::Vector3cd cv;
};

inline PauliCoords from_matrix(const Mat2c& m) {
  using C = std::complex<double>;
  const C i(0.0, 1.0);
  PauliCoords p;
  p.c0 = 0.5 * (m(0, 0) + m(1, 1));
  p.cv[0] = 0.5 * (m(0, 1) + m(1, 0));
  p.cv[1] = 0.5 * i * (m(0, 1) - m(1, 0));
  p.cv[2] = 0.5 * (m(0, 0) - m(1, 1));
  return p;
}

inline Vec3 random_vec(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng), u(rng)};
}

inline Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vec3 v(g(rng), g(rng), g(rng));
  return v / v.norm();
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Smooth admissible previous state for the second model with boundary data
/// taken from the extrapolated profile at the end faces.
inline void random_model2_state(int m, unsigned seed, Model2State& prev, Model2Boundary& bc,
                                bool spin_free = false) {
  std::mt19937_64 rng(seed);
  const double an = uniform(rng, -0.3, 0.3), at = uniform(rng, -0.3, 0.3), ar = uniform(rng, 0.1, 0.7);
  const double ph = uniform(rng, 0.0, 6.0);
  const Vec3 d1 = random_unit(rng), d2 = random_unit(rng);
  auto eval = [&](double x) {
    const double n0 = 1.0 + an * std::cos(M_PI * x + ph);
    const double T = 1.0 + at * std::sin(2.0 * M_PI * x + ph);
    const double W0 = 1.5 * n0 * T;
    Vec3 dir = (1.0 - x) * d1 + x * d2;
    if (dir.norm() < 1e-3) dir = d1;
    dir.normalize();
    const double ratio = spin_free ? 0.0 : ar * (0.6 + 0.4 * std::cos(3.0 * x + ph));
    return MomentPoint{n0, W0, ratio * W0 * dir};
  };
  prev = Model2State{};
  for (int k = 0; k < m; ++k) {
    const MomentPoint p = eval((k + 0.5) / m);
    prev.n0.push_back(p.n0);
    prev.W0.push_back(p.W0);
    prev.Wv.push_back(p.Wv);
  }
  bc.left = eval(0.0);
  bc.right = eval(1.0);
}

}  // namespace spinet::testing

#endif
