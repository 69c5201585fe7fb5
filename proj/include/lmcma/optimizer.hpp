#ifndef LMCMA_OPTIMIZER_HPP
#define LMCMA_OPTIMIZER_HPP

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "lmcma/lmfactor.hpp"
#include "lmcma/psr.hpp"
#include "lmcma/rng.hpp"
#include "lmcma/selection.hpp"

namespace lmcma {

/// Hyperparameters of the LM-CMA loop. finalize() derives the recombination
/// weights from lambda/mu; call it after overriding either.
struct OptimizerConfig {
  int n = 0;
  int lambda = 0;
  int mu = 0;
  std::vector<double> weights;
  double mu_w = 0.0;

  double c_sigma = 0.3;  // PSR smoothing
  double z_star = 0.25;  // PSR target success ratio
  double d_sigma = 1.0;

  int m = 0;        // stored direction vectors
  int n_steps = 0;  // target temporal distance
  int period = 1;   // iterations between store updates (T)
  double m_sigma = 4.0;

  double c_c = 0.0;
  double c_1 = 0.0;

  std::string preset = "default";
  bool restart_on_stagnation = false;

  static OptimizerConfig defaults(int n);
  /// Tuned preset for the nonsmooth Nesterov-Chebyshev-Rosenbrock problem:
  /// doubled population, 15x factor learning rate, c_sigma = 0.3/n^2,
  /// restarts enabled.
  static OptimizerConfig nesterov_preset(int n);

  void finalize();
  void validate() const;

  selection::SelectionParams selection_params() const;
  psr::PsrParams psr_params() const;

  nlohmann::json to_json() const;
  static OptimizerConfig from_json(const nlohmann::json& j);
};

struct Candidate {
  std::vector<double> x;
  std::vector<double> z;  // pre-image; empty for mirrored candidates
  selection::SubsetChoice subset;
  double fitness = std::numeric_limits<double>::quiet_NaN();
  bool mirrored = false;
};

struct Population {
  std::int64_t generation = 0;
  std::vector<Candidate> members;
};

/// The (mu/mu_w, lambda)-LM-CMA behind an ask/tell interface.
///
/// ask() samples lambda candidates: odd candidates draw a temporal subset
/// and a Rademacher pre-image (in that order) and pass it through the
/// reconstructed factor; each even candidate is the exact mirror
/// 2*mean - x of its predecessor. tell() consumes fitnesses, moves the
/// mean, updates the evolution path, periodically stores it in the factor,
/// and adapts the step-size by the Population Success Rule. Behavior
/// depends on fitness values only through their ordering.
class LmCma {
 public:
  LmCma(OptimizerConfig config, std::span<const double> mean0, double sigma0,
        RandomSource rng);
  LmCma(OptimizerConfig config, std::span<const double> mean0, double sigma0,
        std::uint64_t seed);

  void ask(Population& pop);
  Population ask();
  void tell(const Population& pop);

  const OptimizerConfig& config() const { return config_; }
  std::span<const double> mean() const { return mean_; }
  double sigma() const { return sigma_; }
  std::int64_t iteration() const { return iteration_; }
  std::uint64_t evaluations() const { return evaluations_; }
  double best_fitness() const { return best_f_; }
  std::span<const double> best_x() const { return best_x_; }
  std::span<const double> evolution_path() const { return p_c_; }
  const FactorStore& factor() const { return factor_; }
  const psr::PsrState& psr_state() const { return psr_; }
  RandomSource& rng() { return rng_; }

  /// Versioned JSON checkpoint including the RNG state; restore() round-trips
  /// bit-exactly.
  nlohmann::json checkpoint() const;
  static LmCma restore(const nlohmann::json& j);

 private:
  OptimizerConfig config_;
  std::vector<double> mean_;
  double sigma_ = 0.0;
  std::vector<double> p_c_;
  FactorStore factor_;
  psr::PsrState psr_;
  RandomSource rng_;
  std::int64_t iteration_ = 0;
  std::uint64_t evaluations_ = 0;
  double best_f_ = std::numeric_limits<double>::infinity();
  std::vector<double> best_x_;

  std::vector<double> mutation_;  // sigma * Az scratch
  std::vector<double> mean_old_;
  std::vector<int> sort_index_;
  std::vector<double> fitness_;
};

}  // namespace lmcma

#endif
