#include "lmcma/eigenspectrum.hpp"

#include <algorithm>
#include <cmath>

#include "lmcma/kernels.hpp"
#include "lmcma/linalg.hpp"

namespace lmcma {

std::vector<double> factor_eigenspectrum(const FactorStore& store) {
  const int n = store.dimension();
  const int m = store.count();
  if (m == 0) return std::vector<double>(n, 1.0);

  const double a = store.scale_a();
  const double alpha = std::pow(a, static_cast<double>(m));  // a^M

  // A = a^M I + sum_q u_q v_q^T with u_q = a^(M-1-q) b_q p_q. Stack the
  // u rows then the v rows into a 2M x n basis.
  const std::size_t two_m = static_cast<std::size_t>(2 * m);
  std::vector<double> basis(two_m * n, 0.0);
  for (int q = 0; q < m; ++q) {
    auto u_row = std::span<double>(basis).subspan(static_cast<std::size_t>(q) * n, n);
    const double coef = std::pow(a, static_cast<double>(m - 1 - q)) * store.b_at(q);
    kernels::axpy(u_row, coef, store.p_at(q));
    auto v_row =
        std::span<double>(basis).subspan(static_cast<std::size_t>(m + q) * n, n);
    kernels::axpy(v_row, 1.0, store.v_at(q));
  }

  // C - a^2M I = B^T S B for S = [[V V^T, a^M I], [a^M I, 0]] in the (u, v)
  // block order, B the basis rows.
  std::vector<double> s(two_m * two_m, 0.0);
  for (int q = 0; q < m; ++q) {
    for (int r = 0; r < m; ++r)
      s[static_cast<std::size_t>(q) * two_m + r] =
          kernels::dot(store.v_at(q), store.v_at(r));
    s[static_cast<std::size_t>(q) * two_m + (m + q)] = alpha;
    s[static_cast<std::size_t>(m + q) * two_m + q] = alpha;
  }

  // Gram-Schmidt with recorded coefficients: basis = L Q, Q orthonormal rows.
  std::vector<double> l(two_m * two_m, 0.0);
  for (std::size_t i = 0; i < two_m; ++i) {
    auto row = std::span<double>(basis).subspan(i * n, n);
    for (std::size_t k = 0; k < i; ++k) {
      auto q_row = std::span<const double>(basis).subspan(k * n, n);
      const double proj = kernels::dot(q_row, std::span<const double>(row));
      l[i * two_m + k] = proj;
      kernels::axpy(row, -proj, q_row);
    }
    const double norm = std::sqrt(kernels::dot(std::span<const double>(row),
                                               std::span<const double>(row)));
    if (norm > 1e-300) {
      l[i * two_m + i] = norm;
      for (double& v : row) v /= norm;
    } else {
      std::fill(row.begin(), row.end(), 0.0);
    }
  }

  // K = L^T S L; eigenvalues of C are a^2M + eig(K) plus n - 2M copies of a^2M.
  std::vector<double> sl(two_m * two_m, 0.0);
  for (std::size_t i = 0; i < two_m; ++i)
    for (std::size_t j = 0; j < two_m; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < two_m; ++k)
        acc += s[i * two_m + k] * l[k * two_m + j];
      sl[i * two_m + j] = acc;
    }
  std::vector<double> k_mat(two_m * two_m, 0.0);
  for (std::size_t i = 0; i < two_m; ++i)
    for (std::size_t j = 0; j < two_m; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < two_m; ++k)
        acc += l[k * two_m + i] * sl[k * two_m + j];
      k_mat[i * two_m + j] = acc;
    }

  std::vector<double> small = linalg::jacobi_eigenvalues(k_mat, two_m);

  const double base = alpha * alpha;
  std::vector<double> eig;
  eig.reserve(n);
  for (double k : small) eig.push_back(base + k);
  eig.resize(n, base);
  std::sort(eig.begin(), eig.end(), std::greater<double>());
  return eig;
}

}  // namespace lmcma
