#include "lmcma/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "lmcma/eigenspectrum.hpp"
#include "lmcma/kernels.hpp"

namespace lmcma {

namespace {

template <class Opt>
concept HasFactor = requires(const Opt& o) { o.factor().count(); };

std::vector<double> draw_initial_mean(RandomSource& rng,
                                      const bench::BenchmarkProblem& problem) {
  std::vector<double> mean(problem.dimension);
  const double lo = problem.init_lower;
  const double width = problem.init_upper - problem.init_lower;
  for (double& v : mean) v = lo + width * rng.uniform01();
  return mean;
}

template <class Opt, class Factory>
void drive(RunRecord& record, Factory make_opt, const bench::BenchmarkProblem& problem,
           std::uint64_t budget, double target_f, std::uint64_t seed, int lambda,
           bool restarts_default, const OptimizeOptions& options) {
  problem.validate();
  if (budget < static_cast<std::uint64_t>(lambda))
    throw std::invalid_argument("optimize: budget must cover one generation");

  const bool use_restarts = options.restarts.value_or(restarts_default);
  const std::uint64_t stride =
      options.record_stride > 0
          ? options.record_stride
          : std::max<std::uint64_t>(1, budget / static_cast<std::uint64_t>(lambda) / 1000);

  std::ofstream eig_out;
  if (!options.eigenspectrum_path.empty()) {
    if (problem.dimension > 2048)
      throw std::length_error("eigenspectrum dump is capped at n = 2048");
    eig_out.open(options.eigenspectrum_path);
    if (!eig_out) throw std::runtime_error("cannot open eigenspectrum output");
  }

  RandomSource rng(seed);
  std::vector<double> mean0 = draw_initial_mean(rng, problem);
  Opt opt = make_opt(std::move(rng), mean0, problem.sigma0);

  // Stagnation window: 10 * (n / lambda + 10) generations without a 1e-12
  // relative improvement of the run's best value.
  const std::uint64_t window = static_cast<std::uint64_t>(
      std::ceil(10.0 * (static_cast<double>(problem.dimension) / lambda + 10.0)));
  std::vector<double> best_history(window, 0.0);
  std::uint64_t gen_in_run = 0;

  std::uint64_t evals_offset = 0;
  double global_best = std::numeric_limits<double>::infinity();
  const auto start = std::chrono::steady_clock::now();
  auto elapsed_ms = [&]() -> double {
    if (options.deterministic_timing) return 0.0;
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                     start)
        .count();
  };
  auto append_row = [&](std::uint64_t evals, double sigma) {
    TrajectoryRow row{evals, global_best, sigma, elapsed_ms()};
    if (!record.rows.empty() && record.rows.back().evaluations == evals)
      record.rows.back() = row;
    else
      record.rows.push_back(row);
  };

  Population pop;
  std::string reason;
  for (std::uint64_t gen = 0;; ++gen) {
    if (evals_offset + opt.evaluations() + static_cast<std::uint64_t>(lambda) > budget) {
      reason = "budget";
      break;
    }
    opt.ask(pop);
    for (Candidate& cand : pop.members)
      cand.fitness = bench::evaluate(problem, cand.x);
    opt.tell(pop);
    global_best = std::min(global_best, opt.best_fitness());
    const std::uint64_t total = evals_offset + opt.evaluations();

    if constexpr (HasFactor<Opt>) {
      if (eig_out.is_open() &&
          gen % static_cast<std::uint64_t>(options.eigenspectrum_every) == 0) {
        eig_out << opt.iteration() << ',' << total;
        for (double e : factor_eigenspectrum(opt.factor())) eig_out << ',' << e;
        eig_out << '\n';
      }
    }

    if (gen % stride == 0) append_row(total, opt.sigma());
    if (global_best <= target_f) {
      reason = "target";
      break;
    }

    const double run_best = opt.best_fitness();
    if (gen_in_run >= window) {
      const double past = best_history[gen_in_run % window];
      const double improvement = past - run_best;
      const double tol = 1e-12 * std::max({std::fabs(past), std::fabs(run_best), 1e-300});
      if (improvement < tol) {
        if (!use_restarts) {
          reason = "stagnation";
          break;
        }
        evals_offset += opt.evaluations();
        RandomSource carried = opt.rng();
        std::vector<double> mean_new = draw_initial_mean(carried, problem);
        opt = make_opt(std::move(carried), mean_new, problem.sigma0);
        ++record.restarts;
        gen_in_run = 0;
        continue;
      }
    }
    best_history[gen_in_run % window] = run_best;
    ++gen_in_run;
  }

  record.termination = reason;
  record.total_evaluations = evals_offset + opt.evaluations();
  record.best_f = global_best;
  append_row(record.total_evaluations, opt.sigma());
}

void fill_common(RunRecord& record, const std::string& algorithm,
                 const std::string& preset, const bench::BenchmarkProblem& problem,
                 std::uint64_t seed, nlohmann::json config_snapshot) {
  record.algorithm = algorithm;
  record.preset = preset;
  record.function_id = problem.name();
  record.dimension = problem.dimension;
  record.seed = seed;
  record.rotation_seed = problem.rotated ? problem.rotation_seed : 0;
  record.version = kVersion;
  record.kernels_backend = kernels::backend_name(kernels::active_backend());
  record.config_snapshot = std::move(config_snapshot);
}

}  // namespace

RunRecord optimize(const OptimizerConfig& config, const bench::BenchmarkProblem& problem,
                   std::uint64_t budget, double target_f, std::uint64_t seed,
                   const OptimizeOptions& options) {
  config.validate();
  if (config.n != problem.dimension)
    throw std::invalid_argument("optimize: config and problem dimension differ");
  RunRecord record;
  fill_common(record, "lmcma", config.preset, problem, seed, config.to_json());
  auto factory = [&](RandomSource rng, const std::vector<double>& mean0, double sigma0) {
    return LmCma(config, mean0, sigma0, std::move(rng));
  };
  drive<LmCma>(record, factory, problem, budget, target_f, seed, config.lambda,
               config.restart_on_stagnation, options);
  return record;
}

RunRecord optimize_cholesky(const CholeskyCmaConfig& config,
                            const bench::BenchmarkProblem& problem,
                            std::uint64_t budget, double target_f, std::uint64_t seed,
                            const OptimizeOptions& options) {
  config.validate();
  if (config.n != problem.dimension)
    throw std::invalid_argument("optimize: config and problem dimension differ");
  RunRecord record;
  fill_common(record, "cholcma", "default", problem, seed, config.to_json());
  auto factory = [&](RandomSource rng, const std::vector<double>& mean0, double sigma0) {
    return CholeskyCmaEs(config, mean0, sigma0, std::move(rng));
  };
  drive<CholeskyCmaEs>(record, factory, problem, budget, target_f, seed, config.lambda,
                       false, options);
  return record;
}

}  // namespace lmcma
