#ifndef LMCMA_EIGENSPECTRUM_HPP
#define LMCMA_EIGENSPECTRUM_HPP

#include <vector>

#include "lmcma/lmfactor.hpp"

namespace lmcma {

/// Eigenvalues of C = A A^T for the factor reconstructed from all stored
/// pairs, in descending order. Exploits the identity-plus-low-rank shape of
/// the reconstruction: with M stored pairs only a 2M x 2M symmetric problem
/// is solved, so the cost is O(n M^2 + M^3). n - 2M of the returned values
/// equal the pure scaling power a^(2M).
std::vector<double> factor_eigenspectrum(const FactorStore& store);

}  // namespace lmcma

#endif
