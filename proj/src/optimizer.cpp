#include "lmcma/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lmcma/kernels.hpp"

namespace lmcma {

OptimizerConfig OptimizerConfig::defaults(int n) {
  if (n < 2) throw std::invalid_argument("OptimizerConfig: n must be >= 2");
  OptimizerConfig c;
  c.n = n;
  c.lambda = 4 + static_cast<int>(std::floor(3.0 * std::log(static_cast<double>(n))));
  c.mu = c.lambda / 2;
  c.c_sigma = 0.3;
  c.z_star = 0.25;
  c.d_sigma = 1.0;
  c.m = c.lambda;
  c.n_steps = n;
  c.period = std::max(
      1, static_cast<int>(std::floor(std::log(static_cast<double>(n)))));
  c.m_sigma = 4.0;
  c.c_c = 0.5 / std::sqrt(static_cast<double>(n));
  c.c_1 = 1.0 / (10.0 * std::log(static_cast<double>(n) + 1.0));
  c.finalize();
  return c;
}

OptimizerConfig OptimizerConfig::nesterov_preset(int n) {
  OptimizerConfig c = defaults(n);
  c.lambda *= 2;
  c.mu = c.lambda / 2;
  c.c_1 = 15.0 / (10.0 * std::log(static_cast<double>(n) + 1.0));
  c.c_sigma = 0.3 / (static_cast<double>(n) * n);
  c.restart_on_stagnation = true;
  c.preset = "nesterov";
  c.finalize();
  return c;
}

void OptimizerConfig::finalize() {
  if (mu < 1 || mu > lambda) throw std::invalid_argument("OptimizerConfig: bad mu");
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

void OptimizerConfig::validate() const {
  if (n < 2) throw std::invalid_argument("config: n must be >= 2");
  if (lambda < 2) throw std::invalid_argument("config: lambda must be >= 2");
  if (mu < 1 || mu > lambda) throw std::invalid_argument("config: mu out of range");
  if (static_cast<int>(weights.size()) != mu)
    throw std::invalid_argument("config: weights not finalized");
  double sum = 0.0;
  for (double w : weights) sum += w;
  if (std::fabs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("config: weights must sum to 1");
  for (std::size_t i = 1; i < weights.size(); ++i)
    if (!(weights[i] < weights[i - 1]))
      throw std::invalid_argument("config: weights must be strictly decreasing");
  for (double rate : {c_sigma, c_c, c_1})
    if (!(rate > 0.0 && rate < 1.0))
      throw std::invalid_argument("config: learning rates must lie in (0, 1)");
  if (!(d_sigma > 0.0)) throw std::invalid_argument("config: d_sigma must be > 0");
  if (m < 1) throw std::invalid_argument("config: m must be >= 1");
  if (n_steps < 1) throw std::invalid_argument("config: n_steps must be >= 1");
  if (period < 1) throw std::invalid_argument("config: period must be >= 1");
  if (!(m_sigma > 0.0)) throw std::invalid_argument("config: m_sigma must be > 0");
}

selection::SelectionParams OptimizerConfig::selection_params() const {
  selection::SelectionParams p;
  p.n_steps = n_steps;
  p.period = period;
  p.m_sigma = m_sigma;
  return p;
}

psr::PsrParams OptimizerConfig::psr_params() const {
  psr::PsrParams p;
  p.c_sigma = c_sigma;
  p.z_star = z_star;
  p.d_sigma = d_sigma;
  return p;
}

nlohmann::json OptimizerConfig::to_json() const {
  return nlohmann::json{{"n", n},
                        {"lambda", lambda},
                        {"mu", mu},
                        {"c_sigma", c_sigma},
                        {"z_star", z_star},
                        {"d_sigma", d_sigma},
                        {"m", m},
                        {"n_steps", n_steps},
                        {"period", period},
                        {"m_sigma", m_sigma},
                        {"c_c", c_c},
                        {"c_1", c_1},
                        {"preset", preset},
                        {"restart_on_stagnation", restart_on_stagnation}};
}

OptimizerConfig OptimizerConfig::from_json(const nlohmann::json& j) {
  OptimizerConfig c;
  c.n = j.at("n").get<int>();
  c.lambda = j.at("lambda").get<int>();
  c.mu = j.at("mu").get<int>();
  c.c_sigma = j.at("c_sigma").get<double>();
  c.z_star = j.at("z_star").get<double>();
  c.d_sigma = j.at("d_sigma").get<double>();
  c.m = j.at("m").get<int>();
  c.n_steps = j.at("n_steps").get<int>();
  c.period = j.at("period").get<int>();
  c.m_sigma = j.at("m_sigma").get<double>();
  c.c_c = j.at("c_c").get<double>();
  c.c_1 = j.at("c_1").get<double>();
  c.preset = j.at("preset").get<std::string>();
  c.restart_on_stagnation = j.at("restart_on_stagnation").get<bool>();
  c.finalize();
  return c;
}

LmCma::LmCma(OptimizerConfig config, std::span<const double> mean0, double sigma0,
             RandomSource rng)
    : config_(std::move(config)),
      mean_(mean0.begin(), mean0.end()),
      sigma_(sigma0),
      p_c_(config_.n, 0.0),
      factor_(config_.n, config_.m, config_.c_1),
      rng_(rng),
      best_x_(config_.n, 0.0),
      mutation_(config_.n, 0.0),
      mean_old_(config_.n, 0.0) {
  config_.validate();
  if (mean0.size() != static_cast<std::size_t>(config_.n))
    throw std::invalid_argument("LmCma: mean0 has wrong dimension");
  if (!(sigma0 > 0.0)) throw std::invalid_argument("LmCma: sigma0 must be > 0");
  sort_index_.reserve(config_.lambda);
  fitness_.reserve(config_.lambda);
}

LmCma::LmCma(OptimizerConfig config, std::span<const double> mean0, double sigma0,
             std::uint64_t seed)
    : LmCma(std::move(config), mean0, sigma0, RandomSource(seed)) {}

void LmCma::ask(Population& pop) {
  const int n = config_.n;
  const int lambda = config_.lambda;
  const selection::SelectionParams sel = config_.selection_params();

  pop.generation = iteration_;
  pop.members.resize(lambda);
  for (int k = 1; k <= lambda; ++k) {
    Candidate& cand = pop.members[k - 1];
    cand.x.resize(n);
    cand.fitness = std::numeric_limits<double>::quiet_NaN();
    if (k % 2 == 1) {
      cand.mirrored = false;
      cand.subset = selection::select_subset(sel, factor_.count(), k, rng_);
      cand.z.resize(n);
      rng_.rademacher(cand.z);
      factor_.az(cand.z, cand.subset.positions, mutation_);
      kernels::axpby(cand.x, 1.0, mean_, sigma_, mutation_);
    } else {
      cand.mirrored = true;
      cand.z.clear();
      cand.subset = selection::SubsetChoice{};
      kernels::axpby(cand.x, 2.0, mean_, -1.0, pop.members[k - 2].x);
    }
  }
}

Population LmCma::ask() {
  Population pop;
  ask(pop);
  return pop;
}

void LmCma::tell(const Population& pop) {
  const int n = config_.n;
  const int lambda = config_.lambda;
  if (static_cast<int>(pop.members.size()) != lambda)
    throw std::invalid_argument("tell: population size mismatch");
  if (pop.generation != iteration_)
    throw std::invalid_argument("tell: population from a different generation");
  fitness_.resize(lambda);
  for (int i = 0; i < lambda; ++i) {
    const Candidate& cand = pop.members[i];
    if (cand.x.size() != static_cast<std::size_t>(n))
      throw std::invalid_argument("tell: candidate dimension mismatch");
    if (!std::isfinite(cand.fitness))
      throw std::invalid_argument("tell: non-finite fitness");
    fitness_[i] = cand.fitness;
  }

  // Selection: stable sort so equal fitnesses keep candidate order.
  sort_index_.resize(lambda);
  for (int i = 0; i < lambda; ++i) sort_index_[i] = i;
  std::stable_sort(sort_index_.begin(), sort_index_.end(),
                   [&](int a, int b) { return fitness_[a] < fitness_[b]; });

  std::swap(mean_old_, mean_);
  std::fill(mean_.begin(), mean_.end(), 0.0);
  for (int i = 0; i < config_.mu; ++i)
    kernels::axpy(mean_, config_.weights[i], pop.members[sort_index_[i]].x);
  for (double v : mean_)
    if (!std::isfinite(v))
      throw std::runtime_error("tell: non-finite mean after recombination");

  // p_c <- (1 - c_c) p_c + sqrt(c_c (2 - c_c)) sqrt(mu_w) (mean - mean_old) / sigma
  kernels::axpby(mutation_, 1.0, mean_, -1.0, mean_old_);
  const double path_coef =
      std::sqrt(config_.c_c * (2.0 - config_.c_c)) * std::sqrt(config_.mu_w) / sigma_;
  kernels::scale_axpy(p_c_, 1.0 - config_.c_c, path_coef, mutation_);

  if (iteration_ % config_.period == 0)
    selection::update_set(config_.selection_params(), factor_, iteration_, p_c_);

  sigma_ = psr_.update(config_.psr_params(), fitness_, sigma_);

  const int best_idx = sort_index_[0];
  if (pop.members[best_idx].fitness < best_f_) {
    best_f_ = pop.members[best_idx].fitness;
    best_x_ = pop.members[best_idx].x;
  }
  evaluations_ += static_cast<std::uint64_t>(lambda);
  ++iteration_;
}

nlohmann::json LmCma::checkpoint() const {
  const RandomSource::State rng_state = rng_.save();
  return nlohmann::json{
      {"format", 1},
      {"config", config_.to_json()},
      {"mean", mean_},
      {"sigma", sigma_},
      {"p_c", p_c_},
      {"factor", factor_.to_json()},
      {"psr", psr_.to_json()},
      {"iteration", iteration_},
      {"evaluations", evaluations_},
      {"best_f", best_f_},
      {"best_x", best_x_},
      {"rng",
       {{"s", rng_state.s},
        {"seed", rng_state.seed},
        {"has_cached_gaussian", rng_state.has_cached_gaussian},
        {"cached_gaussian_bits", rng_state.cached_gaussian_bits}}}};
}

LmCma LmCma::restore(const nlohmann::json& j) {
  if (j.at("format").get<int>() != 1)
    throw std::invalid_argument("checkpoint: unsupported format version");
  OptimizerConfig config = OptimizerConfig::from_json(j.at("config"));
  const auto mean = j.at("mean").get<std::vector<double>>();
  RandomSource::State rng_state;
  rng_state.s = j.at("rng").at("s").get<std::array<std::uint64_t, 4>>();
  rng_state.seed = j.at("rng").at("seed").get<std::uint64_t>();
  rng_state.has_cached_gaussian = j.at("rng").at("has_cached_gaussian").get<bool>();
  rng_state.cached_gaussian_bits =
      j.at("rng").at("cached_gaussian_bits").get<std::uint64_t>();

  LmCma opt(std::move(config), mean, j.at("sigma").get<double>(),
            RandomSource::restore(rng_state));
  opt.p_c_ = j.at("p_c").get<std::vector<double>>();
  opt.factor_ = FactorStore::from_json(j.at("factor"));
  opt.psr_ = psr::PsrState::from_json(j.at("psr"));
  opt.iteration_ = j.at("iteration").get<std::int64_t>();
  opt.evaluations_ = j.at("evaluations").get<std::uint64_t>();
  opt.best_f_ = j.at("best_f").get<double>();
  opt.best_x_ = j.at("best_x").get<std::vector<double>>();
  return opt;
}

}  // namespace lmcma
