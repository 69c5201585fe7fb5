#ifndef LMCMA_RUN_HPP
#define LMCMA_RUN_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lmcma/bench.hpp"
#include "lmcma/cholesky_cma.hpp"
#include "lmcma/optimizer.hpp"

namespace lmcma {

inline constexpr const char* kVersion = "1.0.0";

struct TrajectoryRow {
  std::uint64_t evaluations = 0;
  double best_f = 0.0;
  double sigma = 0.0;
  double ms = 0.0;
};

/// One optimization run: metadata, a decimated trajectory, and the outcome.
struct RunRecord {
  std::string algorithm;
  std::string preset;
  std::string function_id;
  int dimension = 0;
  std::uint64_t seed = 0;
  std::uint64_t rotation_seed = 0;
  std::string version;
  std::string kernels_backend;
  nlohmann::json config_snapshot;

  std::vector<TrajectoryRow> rows;
  std::string termination;  // "target" | "budget" | "stagnation"
  std::uint64_t total_evaluations = 0;
  std::uint64_t restarts = 0;
  double best_f = 0.0;
};

struct OptimizeOptions {
  std::optional<bool> restarts;   // default: the config's restart policy
  std::uint64_t record_stride = 0;  // 0 = auto (~1000 rows per run)
  bool deterministic_timing = false;  // write 0 in the ms column
  std::string eigenspectrum_path;     // per-generation spectrum CSV (lmcma only)
  int eigenspectrum_every = 100;
};

/// Runs LM-CMA on the problem until target_f is reached, the evaluation
/// budget is exhausted, or the best value stagnates (relative improvement
/// below 1e-12 over 10*(n/lambda + 10) generations). With restarts enabled
/// a stagnation event reinitializes the mean uniformly in the init box and
/// resets the step-size instead of terminating. The initial mean is drawn
/// uniformly from the problem's init box.
RunRecord optimize(const OptimizerConfig& config, const bench::BenchmarkProblem& problem,
                   std::uint64_t budget, double target_f, std::uint64_t seed,
                   const OptimizeOptions& options = {});

/// Same driver around the dense Cholesky-CMA-ES baseline.
RunRecord optimize_cholesky(const CholeskyCmaConfig& config,
                            const bench::BenchmarkProblem& problem,
                            std::uint64_t budget, double target_f, std::uint64_t seed,
                            const OptimizeOptions& options = {});

}  // namespace lmcma

#endif
