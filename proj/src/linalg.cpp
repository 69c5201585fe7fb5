#include "lmcma/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lmcma/kernels.hpp"

namespace lmcma {
namespace linalg {

std::size_t orthonormalize_rows(std::span<double> a, std::size_t rows,
                                std::size_t cols, double eps) {
  if (a.size() != rows * cols) throw std::invalid_argument("orthonormalize_rows: size");
  std::size_t nonzero = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    auto row = a.subspan(r * cols, cols);
    for (std::size_t k = 0; k < r; ++k) {
      auto prev = a.subspan(k * cols, cols);
      double proj = kernels::dot(std::span<const double>(prev),
                                 std::span<const double>(row));
      kernels::axpy(row, -proj, prev);
    }
    double norm = std::sqrt(kernels::dot(std::span<const double>(row),
                                         std::span<const double>(row)));
    if (norm <= eps) {
      std::fill(row.begin(), row.end(), 0.0);
      continue;
    }
    for (double& v : row) v /= norm;
    ++nonzero;
  }
  return nonzero;
}

std::vector<double> jacobi_eigenvalues(std::span<const double> a, std::size_t n) {
  if (a.size() != n * n) throw std::invalid_argument("jacobi_eigenvalues: size");
  std::vector<double> m(a.begin(), a.end());
  auto at = [&](std::size_t i, std::size_t j) -> double& { return m[i * n + j]; };

  const int max_sweeps = 64;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
    if (off <= 1e-30 * (1.0 + off)) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = at(p, q);
        if (apq == 0.0) continue;
        double app = at(p, p), aqq = at(q, q);
        double theta = 0.5 * (aqq - app) / apq;
        double t = std::copysign(1.0, theta) /
                   (std::fabs(theta) + std::sqrt(1.0 + theta * theta));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
      }
    }
  }

  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = at(i, i);
  std::sort(eig.begin(), eig.end(), std::greater<double>());
  return eig;
}

}  // namespace linalg
}  // namespace lmcma
