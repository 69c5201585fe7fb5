#ifndef LMCMA_HARNESS_HPP
#define LMCMA_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lmcma/run.hpp"

namespace lmcma {
namespace harness {

inline constexpr int kSummarySchemaVersion = 1;

/// One (algorithm, problem) combination to run repeatedly.
struct ExperimentCell {
  std::string algorithm = "lmcma";  // "lmcma" | "cholcma"
  std::string function = "sphere";  // bench function id, e.g. "rot_elli"
  int n = 0;
  std::uint64_t budget = 0;  // 0 = default cap of 1e4 * n evaluations
  double target = 1e-10;
  double sigma0 = 3.0;
  std::string preset = "default";  // "default" | "nesterov" (lmcma only)
  int lambda_override = 0;         // 0 = algorithm default
  int m_override = 0;              // 0 = default, -1 = floor(2 sqrt(n))
  std::uint64_t rotation_seed = 1;
  std::optional<bool> restarts;
};

struct ExperimentSpec {
  std::vector<ExperimentCell> cells;
  int runs = 11;
  std::uint64_t base_seed = 1;  // run r uses seed base_seed + r
  std::filesystem::path out_dir;
  int threads = 0;  // 0 = hardware concurrency
  bool deterministic_timing = false;
  bool emit_eigenspectrum = false;

  void validate() const;
};

/// Aggregate of one cell over its runs. Runs that do not reach the target
/// are censored at the budget; the median then reports the budget and sets
/// the censored flag.
struct CellSummary {
  ExperimentCell cell;
  std::uint64_t budget_used = 0;
  std::vector<std::uint64_t> evals_per_run;  // censored runs count the budget
  std::vector<bool> reached_target;
  std::vector<double> best_f_per_run;
  std::vector<std::string> run_errors;  // empty string = run succeeded
  std::uint64_t median_evals = 0;
  bool median_censored = false;
  double success_rate = 0.0;

  nlohmann::json to_json() const;
};

/// Executes every (cell, run) pair, writes one trajectory CSV per run and
/// one JSON summary per cell into the output directory, and returns the
/// summaries. Runs are deterministic per seed; independent runs may execute
/// on parallel worker threads. A failing run is recorded in the summary and
/// does not abort the batch.
std::vector<CellSummary> run_experiment(const ExperimentSpec& spec);

/// Single run, fully configured from a cell; used by run_experiment and the
/// CLI. The returned record is independent of thread scheduling.
RunRecord run_cell_once(const ExperimentCell& cell, std::uint64_t seed,
                        const OptimizeOptions& options,
                        const bench::BenchmarkProblem& problem);

/// Builds the problem for a cell (shared across the cell's runs).
bench::BenchmarkProblem problem_for(const ExperimentCell& cell);

/// Effective per-cell evaluation budget (default cap 1e4 * n).
std::uint64_t budget_for(const ExperimentCell& cell);

/// Floating-point memory-slot model: (2m + lambda + 6) n + 5m for lmcma and
/// 2n^2 + lambda n + 3n for the dense cholcma baseline.
std::uint64_t memory_slots(const std::string& algorithm, std::uint64_t n,
                           std::uint64_t m, std::uint64_t lambda);

/// Lower median (6th of 11) of the values.
std::uint64_t median_evals(std::vector<std::uint64_t> values);

void write_trajectory_csv(const std::filesystem::path& path, const RunRecord& record);
std::string trajectory_csv_string(const RunRecord& record);
std::filesystem::path run_csv_path(const std::filesystem::path& out_dir,
                                   const ExperimentCell& cell, int run_index);
std::filesystem::path summary_json_path(const std::filesystem::path& out_dir,
                                        const ExperimentCell& cell);

}  // namespace harness
}  // namespace lmcma

#endif
