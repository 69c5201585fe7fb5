#ifndef LMCMA_LINALG_HPP
#define LMCMA_LINALG_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace lmcma {
namespace linalg {

/// Modified Gram-Schmidt on the rows of a row-major matrix, in place.
/// Rows with norm below eps are zeroed instead of normalized. Returns the
/// number of nonzero rows produced.
std::size_t orthonormalize_rows(std::span<double> a, std::size_t rows,
                                std::size_t cols, double eps = 1e-300);

/// Eigenvalues of a symmetric row-major matrix by cyclic Jacobi sweeps,
/// returned in descending order. Intended for small matrices (n <= a few
/// hundred).
std::vector<double> jacobi_eigenvalues(std::span<const double> a, std::size_t n);

}  // namespace linalg
}  // namespace lmcma

#endif
