#include "lmcma/cholesky_cma.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lmcma/kernels.hpp"

namespace lmcma {

CholeskyCmaConfig CholeskyCmaConfig::defaults(int n) {
  if (n < 2) throw std::invalid_argument("CholeskyCmaConfig: n must be >= 2");
  CholeskyCmaConfig c;
  c.n = n;
  c.lambda = 4 + static_cast<int>(std::floor(3.0 * std::log(static_cast<double>(n))));
  c.mu = c.lambda / 2;
  c.finalize();
  c.c_sigma = std::sqrt(c.mu_w) / (std::sqrt(static_cast<double>(n)) + std::sqrt(c.mu_w));
  c.d_sigma = 1.0 + c.c_sigma +
              2.0 * std::max(0.0, std::sqrt((c.mu_w - 1.0) / (n + 1.0)) - 1.0);
  c.c_c = 4.0 / (n + 4.0);
  const double root2 = std::sqrt(2.0);
  c.c_1 = 2.0 / ((n + root2) * (n + root2));
  return c;
}

void CholeskyCmaConfig::finalize() {
  if (mu < 1 || mu > lambda)
    throw std::invalid_argument("CholeskyCmaConfig: bad mu");
  weights.assign(mu, 0.0);
  const double log_mu1 = std::log(static_cast<double>(mu) + 1.0);
  double denom = mu * log_mu1;
  for (int j = 1; j <= mu; ++j) denom -= std::log(static_cast<double>(j));
  for (int i = 1; i <= mu; ++i)
    weights[i - 1] = (log_mu1 - std::log(static_cast<double>(i))) / denom;
  double sum_sq = 0.0;
  for (double w : weights) sum_sq += w * w;
  mu_w = 1.0 / sum_sq;
}

void CholeskyCmaConfig::validate() const {
  if (n < 2) throw std::invalid_argument("cholcma config: n must be >= 2");
  if (n > CholeskyCmaEs::kMaxDimension)
    throw std::length_error("cholcma config: n exceeds the dense-factor cap " +
                            std::to_string(CholeskyCmaEs::kMaxDimension));
  if (lambda < 2) throw std::invalid_argument("cholcma config: lambda must be >= 2");
  if (mu < 1 || mu > lambda)
    throw std::invalid_argument("cholcma config: mu out of range");
  if (static_cast<int>(weights.size()) != mu)
    throw std::invalid_argument("cholcma config: weights not finalized");
  for (double rate : {c_sigma, c_c, c_1})
    if (!(rate > 0.0 && rate < 1.0))
      throw std::invalid_argument("cholcma config: learning rates must lie in (0, 1)");
  if (!(d_sigma > 0.0))
    throw std::invalid_argument("cholcma config: d_sigma must be > 0");
}

nlohmann::json CholeskyCmaConfig::to_json() const {
  return nlohmann::json{{"n", n},           {"lambda", lambda}, {"mu", mu},
                        {"c_sigma", c_sigma}, {"d_sigma", d_sigma}, {"c_c", c_c},
                        {"c_1", c_1}};
}

CholeskyCmaEs::CholeskyCmaEs(CholeskyCmaConfig config, std::span<const double> mean0,
                             double sigma0, RandomSource rng)
    : config_(std::move(config)),
      mean_(mean0.begin(), mean0.end()),
      sigma_(sigma0),
      rng_(rng),
      best_f_(std::numeric_limits<double>::infinity()) {
  config_.validate();
  const int n = config_.n;
  if (mean0.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("CholeskyCmaEs: mean0 has wrong dimension");
  if (!(sigma0 > 0.0)) throw std::invalid_argument("CholeskyCmaEs: sigma0 must be > 0");
  p_sigma_.assign(n, 0.0);
  p_c_.assign(n, 0.0);
  const std::size_t nn = static_cast<std::size_t>(n) * n;
  a_mat_.assign(nn, 0.0);
  a_inv_.assign(nn, 0.0);
  for (int i = 0; i < n; ++i) {
    a_mat_[static_cast<std::size_t>(i) * n + i] = 1.0;
    a_inv_[static_cast<std::size_t>(i) * n + i] = 1.0;
  }
  best_x_.assign(n, 0.0);
  const double nd = static_cast<double>(n);
  expected_norm_ = std::sqrt(nd) * (1.0 - 1.0 / (4.0 * nd) + 1.0 / (21.0 * nd * nd));
  z_w_.assign(n, 0.0);
  v_.assign(n, 0.0);
  w_t_.assign(n, 0.0);
  scratch_.assign(n, 0.0);
  mean_old_.assign(n, 0.0);
}

CholeskyCmaEs::CholeskyCmaEs(CholeskyCmaConfig config, std::span<const double> mean0,
                             double sigma0, std::uint64_t seed)
    : CholeskyCmaEs(std::move(config), mean0, sigma0, RandomSource(seed)) {}

void CholeskyCmaEs::ask(Population& pop) {
  const int n = config_.n;
  pop.generation = iteration_;
  pop.members.resize(config_.lambda);
  for (Candidate& cand : pop.members) {
    cand.mirrored = false;
    cand.subset = selection::SubsetChoice{};
    cand.fitness = std::numeric_limits<double>::quiet_NaN();
    cand.z.resize(n);
    for (double& zi : cand.z) zi = rng_.gaussian();
    cand.x.resize(n);
    kernels::matvec(scratch_, a_mat_, n, n, cand.z);
    kernels::axpby(cand.x, 1.0, mean_, sigma_, scratch_);
  }
}

Population CholeskyCmaEs::ask() {
  Population pop;
  ask(pop);
  return pop;
}

void CholeskyCmaEs::tell(const Population& pop) {
  const int n = config_.n;
  const int lambda = config_.lambda;
  if (static_cast<int>(pop.members.size()) != lambda)
    throw std::invalid_argument("tell: population size mismatch");
  if (pop.generation != iteration_)
    throw std::invalid_argument("tell: population from a different generation");
  for (const Candidate& cand : pop.members)
    if (!std::isfinite(cand.fitness))
      throw std::invalid_argument("tell: non-finite fitness");

  sort_index_.resize(lambda);
  for (int i = 0; i < lambda; ++i) sort_index_[i] = i;
  std::stable_sort(sort_index_.begin(), sort_index_.end(), [&](int a, int b) {
    return pop.members[a].fitness < pop.members[b].fitness;
  });

  std::swap(mean_old_, mean_);
  std::fill(mean_.begin(), mean_.end(), 0.0);
  std::fill(z_w_.begin(), z_w_.end(), 0.0);
  for (int i = 0; i < config_.mu; ++i) {
    const Candidate& cand = pop.members[sort_index_[i]];
    kernels::axpy(mean_, config_.weights[i], cand.x);
    kernels::axpy(z_w_, config_.weights[i], cand.z);
  }
  for (double v : mean_)
    if (!std::isfinite(v))
      throw std::runtime_error("tell: non-finite mean after recombination");

  const double root_mu_w = std::sqrt(config_.mu_w);
  kernels::scale_axpy(
      p_sigma_, 1.0 - config_.c_sigma,
      std::sqrt(config_.c_sigma * (2.0 - config_.c_sigma)) * root_mu_w, z_w_);
  kernels::matvec(scratch_, a_mat_, n, n, z_w_);  // A z_w
  kernels::scale_axpy(p_c_, 1.0 - config_.c_c,
                      std::sqrt(config_.c_c * (2.0 - config_.c_c)) * root_mu_w,
                      scratch_);

  kernels::matvec(v_, a_inv_, n, n, p_c_);
  const double nv = kernels::dot(v_, v_);
  const double a = std::sqrt(1.0 - config_.c_1);
  const double c_inv = 1.0 / a;
  if (nv > FactorStore::kDegenerateEps) {
    const double root = std::sqrt(1.0 + (config_.c_1 / (1.0 - config_.c_1)) * nv);
    const double b_coef = (a / nv) * (root - 1.0);
    const double d_coef = (1.0 / (a * nv)) * (1.0 - 1.0 / root);
    kernels::matvec_t(w_t_, a_inv_, n, n, v_);  // v^T A_inv
    for (int i = 0; i < n; ++i) {
      auto a_row = std::span<double>(a_mat_).subspan(static_cast<std::size_t>(i) * n, n);
      kernels::scale_axpy(a_row, a, b_coef * p_c_[i], v_);
      auto inv_row = std::span<double>(a_inv_).subspan(static_cast<std::size_t>(i) * n, n);
      kernels::scale_axpy(inv_row, c_inv, -d_coef * v_[i], w_t_);
    }
  } else {
    // Degenerate direction: both factors scale uniformly.
    for (double& e : a_mat_) e *= a;
    for (double& e : a_inv_) e *= c_inv;
  }

  const double norm_ps = std::sqrt(kernels::dot(p_sigma_, p_sigma_));
  sigma_ *= std::exp((config_.c_sigma / config_.d_sigma) *
                     (norm_ps / expected_norm_ - 1.0));
  if (!(sigma_ > 0.0)) sigma_ = 1e-300;

  const Candidate& best = pop.members[sort_index_[0]];
  if (best.fitness < best_f_) {
    best_f_ = best.fitness;
    best_x_ = best.x;
  }
  evaluations_ += static_cast<std::uint64_t>(lambda);
  ++iteration_;
}

double CholeskyCmaEs::identity_drift() const {
  const int n = config_.n;
  double worst = 0.0;
  std::vector<double> col(n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) col[i] = a_inv_[static_cast<std::size_t>(i) * n + j];
    for (int i = 0; i < n; ++i) {
      auto row = std::span<const double>(a_mat_).subspan(
          static_cast<std::size_t>(i) * n, n);
      const double value = kernels::dot(row, col);
      const double err = std::fabs(value - (i == j ? 1.0 : 0.0));
      if (err > worst) worst = err;
    }
  }
  return worst;
}

}  // namespace lmcma
