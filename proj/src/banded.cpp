#include "spinet/banded.hpp"

#include <stdexcept>

namespace spinet {

std::vector<double> solve_tridiagonal(const Tridiagonal& a, const std::vector<double>& rhs) {
  const int n = a.size();
  if (static_cast<int>(rhs.size()) != n) throw std::invalid_argument("solve_tridiagonal: size mismatch");
  std::vector<double> c(n), d(n);
  double piv = a.diag[0];
  if (piv == 0.0) throw std::runtime_error("solve_tridiagonal: zero pivot in row 0");
  c[0] = a.upper[0] / piv;
  d[0] = rhs[0] / piv;
  for (int i = 1; i < n; ++i) {
    piv = a.diag[i] - a.lower[i] * c[i - 1];
    if (piv == 0.0 || !std::isfinite(piv)) throw std::runtime_error("solve_tridiagonal: zero pivot in row " + std::to_string(i));
    c[i] = i + 1 < n ? a.upper[i] / piv : 0.0;
    d[i] = (rhs[i] - a.lower[i] * d[i - 1]) / piv;
  }
  for (int i = n - 2; i >= 0; --i) d[i] -= c[i] * d[i + 1];
  return d;
}

std::vector<Vec3> solve_block_tridiagonal(const BlockTridiagonal& a, const std::vector<Vec3>& rhs) {
  const int n = a.size();
  if (static_cast<int>(rhs.size()) != n) throw std::invalid_argument("solve_block_tridiagonal: size mismatch");
  std::vector<Mat3> c(n, Mat3::Zero());
  std::vector<Vec3> d(n);
  Mat3 piv = a.diag[0];
  for (int i = 0; i < n; ++i) {
    if (i > 0) piv = a.diag[i] - a.lower[i] * c[i - 1];
    Eigen::FullPivLU<Mat3> lu(piv);
    if (!lu.isInvertible()) throw std::runtime_error("solve_block_tridiagonal: singular pivot block " + std::to_string(i));
    if (i + 1 < n) c[i] = lu.solve(a.upper[i]);
    d[i] = lu.solve(i > 0 ? Vec3(rhs[i] - a.lower[i] * d[i - 1]) : rhs[i]);
  }
  for (int i = n - 2; i >= 0; --i) d[i] -= c[i] * d[i + 1];
  return d;
}

}  // namespace spinet
