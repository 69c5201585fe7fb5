#ifndef LMCMA_CHOLESKY_CMA_HPP
#define LMCMA_CHOLESKY_CMA_HPP

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "lmcma/optimizer.hpp"
#include "lmcma/rng.hpp"

namespace lmcma {

/// Hyperparameters of the dense-factor baseline.
struct CholeskyCmaConfig {
  int n = 0;
  int lambda = 0;
  int mu = 0;
  std::vector<double> weights;
  double mu_w = 0.0;
  double c_sigma = 0.0;  // CSA smoothing
  double d_sigma = 0.0;
  double c_c = 0.0;
  double c_1 = 0.0;

  static CholeskyCmaConfig defaults(int n);
  void finalize();
  void validate() const;
  nlohmann::json to_json() const;
};

/// (mu/mu_w, lambda)-Cholesky-CMA-ES baseline with explicit n x n factor
/// and inverse, updated by paired rank-one formulas; Gaussian pre-images
/// and cumulative step-size adaptation. Dense storage caps n at 2048.
class CholeskyCmaEs {
 public:
  static constexpr int kMaxDimension = 2048;

  CholeskyCmaEs(CholeskyCmaConfig config, std::span<const double> mean0,
                double sigma0, RandomSource rng);
  CholeskyCmaEs(CholeskyCmaConfig config, std::span<const double> mean0,
                double sigma0, std::uint64_t seed);

  void ask(Population& pop);
  Population ask();
  void tell(const Population& pop);

  const CholeskyCmaConfig& config() const { return config_; }
  std::span<const double> mean() const { return mean_; }
  double sigma() const { return sigma_; }
  std::int64_t iteration() const { return iteration_; }
  std::uint64_t evaluations() const { return evaluations_; }
  double best_fitness() const { return best_f_; }
  std::span<const double> best_x() const { return best_x_; }
  std::span<const double> factor() const { return a_mat_; }
  std::span<const double> factor_inverse() const { return a_inv_; }
  RandomSource& rng() { return rng_; }

  /// max |A A_inv - I|; O(n^3), intended for tests.
  double identity_drift() const;

 private:
  CholeskyCmaConfig config_;
  std::vector<double> mean_;
  double sigma_ = 0.0;
  std::vector<double> p_sigma_;
  std::vector<double> p_c_;
  std::vector<double> a_mat_;  // n x n row-major
  std::vector<double> a_inv_;
  RandomSource rng_;
  std::int64_t iteration_ = 0;
  std::uint64_t evaluations_ = 0;
  double best_f_ = 0.0;
  std::vector<double> best_x_;
  double expected_norm_ = 0.0;

  std::vector<double> z_w_;
  std::vector<double> v_;
  std::vector<double> w_t_;
  std::vector<double> scratch_;
  std::vector<double> mean_old_;
  std::vector<int> sort_index_;
};

}  // namespace lmcma

#endif
