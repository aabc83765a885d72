#ifndef SPINET_BANDED_HPP
#define SPINET_BANDED_HPP

#include <vector>

#include "spinet/pauli.hpp"

namespace spinet {

/// Tridiagonal system lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i].
/// lower[0] and upper[n-1] are ignored.
struct Tridiagonal {
  std::vector<double> lower, diag, upper;

  explicit Tridiagonal(int n = 0) : lower(n, 0.0), diag(n, 0.0), upper(n, 0.0) {}
  int size() const { return static_cast<int>(diag.size()); }
};

/// Thomas algorithm without pivoting. Throws std::runtime_error on a zero
/// pivot.
std::vector<double> solve_tridiagonal(const Tridiagonal& a, const std::vector<double>& rhs);

/// Block tridiagonal system with 3x3 blocks.
struct BlockTridiagonal {
  std::vector<Mat3> lower, diag, upper;

  explicit BlockTridiagonal(int n = 0)
      : lower(n, Mat3::Zero()), diag(n, Mat3::Zero()), upper(n, Mat3::Zero()) {}
  int size() const { return static_cast<int>(diag.size()); }
};

/// Block Thomas algorithm; each diagonal pivot block is factored by LU with
/// partial pivoting. Throws std::runtime_error on a singular pivot block.
std::vector<Vec3> solve_block_tridiagonal(const BlockTridiagonal& a, const std::vector<Vec3>& rhs);

}  // namespace spinet

#endif
