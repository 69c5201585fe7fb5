#ifndef LMCMA_SELECTION_HPP
#define LMCMA_SELECTION_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "lmcma/lmfactor.hpp"
#include "lmcma/rng.hpp"

namespace lmcma {
namespace selection {

struct SelectionParams {
  int n_steps = 1;    // target temporal distance between stored vectors
  int period = 1;     // iterations between store updates (T)
  double m_sigma = 4.0;

  static SelectionParams defaults(int n);
  void validate() const;
};

/// Temporal positions to use when reconstructing the sampling transform
/// for one candidate: the latest m_star of the stored pairs.
struct SubsetChoice {
  int m_star = 0;
  std::vector<int> positions;  // (count - m_star) .. (count - 1), oldest first
};

/// Stores p_c into the factor, choosing the pair to replace once the store
/// is full: the newer member of the consecutive pair whose temporal gap
/// falls shortest of the target distance, or the oldest pair when every
/// gap already meets the target. Ties break toward the oldest pair.
/// Must be called only when iteration % period == 0. Returns the slot
/// written.
int update_set(const SelectionParams& params, FactorStore& store,
               std::int64_t iteration, std::span<const double> p_c);

/// Draws m_star from a truncated half-normal with scale m_sigma (10x for
/// the first candidate of a generation) and clamps it by the number of
/// stored pairs. k is the 1-based candidate index.
SubsetChoice select_subset(const SelectionParams& params, int count, int k,
                           RandomSource& src);

}  // namespace selection
}  // namespace lmcma

#endif
