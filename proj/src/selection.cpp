#include "lmcma/selection.hpp"

#include <cmath>
#include <stdexcept>

namespace lmcma {
namespace selection {

SelectionParams SelectionParams::defaults(int n) {
  if (n < 2) throw std::invalid_argument("SelectionParams: n must be >= 2");
  SelectionParams p;
  p.n_steps = n;
  p.period = std::max(1, static_cast<int>(std::floor(std::log(static_cast<double>(n)))));
  p.m_sigma = 4.0;
  return p;
}

void SelectionParams::validate() const {
  if (n_steps < 1) throw std::invalid_argument("SelectionParams: n_steps must be >= 1");
  if (period < 1) throw std::invalid_argument("SelectionParams: period must be >= 1");
  if (!(m_sigma > 0.0))
    throw std::invalid_argument("SelectionParams: m_sigma must be > 0");
}

int update_set(const SelectionParams& params, FactorStore& store,
               std::int64_t iteration, std::span<const double> p_c) {
  if (iteration % params.period != 0)
    throw std::logic_error("update_set: called off the update period");
  const std::int64_t t_prime = iteration / params.period;
  const std::int64_t stamp = t_prime * params.period;

  if (store.count() < store.capacity()) return store.append(p_c, stamp);

  // Smallest gap deficit over consecutive stored pairs, oldest scan order.
  const int m = store.count();
  int i_min = 0;
  std::int64_t best_deficit = 0;
  for (int i = 0; i + 1 < m; ++i) {
    const std::int64_t deficit =
        store.stamp_at(i + 1) - store.stamp_at(i) - params.n_steps;
    if (i == 0 || deficit < best_deficit) {
      best_deficit = deficit;
      i_min = i;
    }
  }
  const int position = best_deficit >= 0 ? 0 : i_min + 1;
  return store.replace_at(position, p_c, stamp);
}

SubsetChoice select_subset(const SelectionParams& params, int count, int k,
                           RandomSource& src) {
  if (count < 0) throw std::invalid_argument("select_subset: negative count");
  if (k < 1) throw std::invalid_argument("select_subset: k is 1-based");
  const double sigma_eff = (k == 1) ? 10.0 * params.m_sigma : params.m_sigma;
  const double draw = sigma_eff * src.half_normal();
  SubsetChoice choice;
  choice.m_star = static_cast<int>(
      std::min(std::floor(draw), static_cast<double>(count)));
  choice.positions.resize(choice.m_star);
  for (int i = 0; i < choice.m_star; ++i)
    choice.positions[i] = count - choice.m_star + i;
  return choice;
}

}  // namespace selection
}  // namespace lmcma
