#ifndef LMCMA_PSR_HPP
#define LMCMA_PSR_HPP

#include <span>
#include <vector>

#include <json.hpp>

namespace lmcma {
namespace psr {

struct PsrParams {
  double c_sigma = 0.3;
  double z_star = 0.25;
  double d_sigma = 1.0;

  void validate() const;
};

/// Population Success Rule. Ranks the previous and current generations in
/// their merged fitness ordering and drives the step-size from the
/// normalized rank-sum difference. Depends on fitness values only through
/// their relative order.
class PsrState {
 public:
  /// Returns the adapted step-size. On the first call (no previous
  /// generation yet) the step-size is returned unchanged and the state is
  /// seeded with the given fitnesses.
  double update(const PsrParams& params, std::span<const double> curr_fitness,
                double sigma);

  double accumulator() const { return s_; }
  bool seeded() const { return seeded_; }
  std::span<const double> previous_fitness() const { return prev_fitness_; }

  /// Rank-sum success measurement in [-1 - z_star, 1 - z_star]. Merged
  /// ranking is stable with previous-generation entries winning ties.
  static double z_psr(std::span<const double> prev_fitness,
                      std::span<const double> curr_fitness, double z_star);

  nlohmann::json to_json() const;
  static PsrState from_json(const nlohmann::json& j);

 private:
  double s_ = 0.0;
  std::vector<double> prev_fitness_;
  bool seeded_ = false;
};

}  // namespace psr
}  // namespace lmcma

#endif
