#include "lmcma/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <thread>

namespace lmcma {
namespace harness {

namespace {

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

int resolve_m(const ExperimentCell& cell, const OptimizerConfig& defaults) {
  if (cell.m_override == 0) return defaults.m;
  if (cell.m_override == -1)
    return static_cast<int>(std::floor(2.0 * std::sqrt(static_cast<double>(cell.n))));
  if (cell.m_override < 1)
    throw std::invalid_argument("m override must be >= 1 (or -1 for 2sqrt)");
  return cell.m_override;
}

OptimizerConfig lmcma_config_for(const ExperimentCell& cell) {
  OptimizerConfig config = cell.preset == "nesterov"
                               ? OptimizerConfig::nesterov_preset(cell.n)
                               : OptimizerConfig::defaults(cell.n);
  if (cell.preset != "nesterov" && cell.preset != "default")
    throw std::invalid_argument("unknown preset: " + cell.preset);
  if (cell.lambda_override > 0) {
    config.lambda = cell.lambda_override;
    config.mu = std::max(1, config.lambda / 2);
    config.finalize();
  }
  config.m = resolve_m(cell, config);
  if (cell.restarts.has_value()) config.restart_on_stagnation = *cell.restarts;
  config.validate();
  return config;
}

CholeskyCmaConfig cholcma_config_for(const ExperimentCell& cell) {
  if (cell.preset == "nesterov")
    throw std::invalid_argument("the nesterov preset applies to lmcma only");
  CholeskyCmaConfig config = CholeskyCmaConfig::defaults(cell.n);
  if (cell.lambda_override > 0) {
    config.lambda = cell.lambda_override;
    config.mu = std::max(1, config.lambda / 2);
    config.finalize();
  }
  config.validate();
  return config;
}

}  // namespace

void ExperimentSpec::validate() const {
  if (cells.empty()) throw std::invalid_argument("experiment: no cells");
  if (runs < 1) throw std::invalid_argument("experiment: runs must be >= 1");
  if (out_dir.empty()) throw std::invalid_argument("experiment: no output directory");
  for (const ExperimentCell& cell : cells) {
    if (cell.n < 2) throw std::invalid_argument("experiment: cell dimension < 2");
    if (cell.algorithm != "lmcma" && cell.algorithm != "cholcma")
      throw std::invalid_argument("experiment: unknown algorithm " + cell.algorithm);
    if (!(cell.target > 0.0)) throw std::invalid_argument("experiment: target <= 0");
    if (!(cell.sigma0 > 0.0)) throw std::invalid_argument("experiment: sigma0 <= 0");
  }
}

bench::BenchmarkProblem problem_for(const ExperimentCell& cell) {
  bench::BenchmarkProblem problem =
      bench::BenchmarkProblem::from_name(cell.function, cell.n, cell.rotation_seed);
  problem.target_f = cell.target;
  problem.sigma0 = cell.sigma0;
  return problem;
}

std::uint64_t budget_for(const ExperimentCell& cell) {
  if (cell.budget > 0) return cell.budget;
  return static_cast<std::uint64_t>(10000) * static_cast<std::uint64_t>(cell.n);
}

RunRecord run_cell_once(const ExperimentCell& cell, std::uint64_t seed,
                        const OptimizeOptions& options,
                        const bench::BenchmarkProblem& problem) {
  const std::uint64_t budget = budget_for(cell);
  if (cell.algorithm == "lmcma") {
    OptimizerConfig config = lmcma_config_for(cell);
    return optimize(config, problem, budget, cell.target, seed, options);
  }
  CholeskyCmaConfig config = cholcma_config_for(cell);
  return optimize_cholesky(config, problem, budget, cell.target, seed, options);
}

std::uint64_t memory_slots(const std::string& algorithm, std::uint64_t n,
                           std::uint64_t m, std::uint64_t lambda) {
  if (n == 0) throw std::invalid_argument("memory_slots: n must be positive");
  if (algorithm == "lmcma") return (2 * m + lambda + 6) * n + 5 * m;
  if (algorithm == "cholcma") return 2 * n * n + lambda * n + 3 * n;
  throw std::invalid_argument("memory_slots: unknown algorithm " + algorithm);
}

std::uint64_t median_evals(std::vector<std::uint64_t> values) {
  if (values.empty()) throw std::invalid_argument("median of nothing");
  std::sort(values.begin(), values.end());
  return values[(values.size() - 1) / 2];
}

std::string trajectory_csv_string(const RunRecord& record) {
  std::string out = "evals,best_f,sigma,ms\n";
  for (const TrajectoryRow& row : record.rows) {
    out += std::to_string(row.evaluations);
    out += ',';
    out += format_double(row.best_f);
    out += ',';
    out += format_double(row.sigma);
    out += ',';
    out += format_double(row.ms);
    out += '\n';
  }
  return out;
}

void write_trajectory_csv(const std::filesystem::path& path, const RunRecord& record) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << trajectory_csv_string(record);
}

std::filesystem::path run_csv_path(const std::filesystem::path& out_dir,
                                   const ExperimentCell& cell, int run_index) {
  return out_dir / (cell.algorithm + "_" + cell.function + "_n" +
                    std::to_string(cell.n) + "_run" + std::to_string(run_index) +
                    ".csv");
}

std::filesystem::path summary_json_path(const std::filesystem::path& out_dir,
                                        const ExperimentCell& cell) {
  return out_dir / (cell.algorithm + "_" + cell.function + "_n" +
                    std::to_string(cell.n) + "_summary.json");
}

nlohmann::json CellSummary::to_json() const {
  nlohmann::json runs = nlohmann::json::array();
  for (std::size_t r = 0; r < evals_per_run.size(); ++r) {
    runs.push_back({{"run", r},
                    {"evaluations", evals_per_run[r]},
                    {"reached_target", static_cast<bool>(reached_target[r])},
                    {"best_f", best_f_per_run[r]},
                    {"error", run_errors[r]}});
  }
  return nlohmann::json{{"schema_version", kSummarySchemaVersion},
                        {"algorithm", cell.algorithm},
                        {"function", cell.function},
                        {"n", cell.n},
                        {"budget", budget_used},
                        {"target", cell.target},
                        {"preset", cell.preset},
                        {"median_evals", median_evals},
                        {"median_censored", median_censored},
                        {"success_rate", success_rate},
                        {"runs", runs}};
}

std::vector<CellSummary> run_experiment(const ExperimentSpec& spec) {
  spec.validate();

  // Surface configuration errors before anything runs.
  for (const ExperimentCell& cell : spec.cells) {
    if (cell.algorithm == "lmcma")
      lmcma_config_for(cell);
    else
      cholcma_config_for(cell);
  }

  std::filesystem::create_directories(spec.out_dir);
  {
    // Probe writability up front so nothing runs against a bad destination.
    const std::filesystem::path probe = spec.out_dir / ".write_probe";
    std::ofstream test(probe);
    if (!test) throw std::runtime_error("output directory is not writable: " +
                                        spec.out_dir.string());
    test.close();
    std::filesystem::remove(probe);
  }

  struct Task {
    std::size_t cell_index;
    int run_index;
  };
  std::vector<Task> tasks;
  for (std::size_t c = 0; c < spec.cells.size(); ++c)
    for (int r = 0; r < spec.runs; ++r) tasks.push_back({c, r});

  std::vector<bench::BenchmarkProblem> problems;
  problems.reserve(spec.cells.size());
  for (const ExperimentCell& cell : spec.cells) problems.push_back(problem_for(cell));

  std::vector<RunRecord> records(tasks.size());
  std::vector<std::string> errors(tasks.size());

  int thread_count = spec.threads > 0
                         ? spec.threads
                         : static_cast<int>(std::thread::hardware_concurrency());
  thread_count = std::max(1, std::min<int>(thread_count, static_cast<int>(tasks.size())));

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= tasks.size()) return;
      const Task& task = tasks[idx];
      const ExperimentCell& cell = spec.cells[task.cell_index];
      OptimizeOptions options;
      options.deterministic_timing = spec.deterministic_timing;
      options.restarts = cell.restarts;
      if (spec.emit_eigenspectrum && cell.algorithm == "lmcma") {
        options.eigenspectrum_path =
            (spec.out_dir / (cell.algorithm + "_" + cell.function + "_n" +
                             std::to_string(cell.n) + "_run" +
                             std::to_string(task.run_index) + "_eigenspectrum.csv"))
                .string();
      }
      try {
        records[idx] = run_cell_once(cell, spec.base_seed + task.run_index, options,
                                     problems[task.cell_index]);
      } catch (const std::exception& e) {
        errors[idx] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < thread_count; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  std::vector<CellSummary> summaries;
  summaries.reserve(spec.cells.size());
  for (std::size_t c = 0; c < spec.cells.size(); ++c) {
    const ExperimentCell& cell = spec.cells[c];
    CellSummary summary;
    summary.cell = cell;
    summary.budget_used = budget_for(cell);
    int successes = 0;
    for (int r = 0; r < spec.runs; ++r) {
      const std::size_t idx = c * static_cast<std::size_t>(spec.runs) + r;
      const RunRecord& record = records[idx];
      if (!errors[idx].empty()) {
        summary.evals_per_run.push_back(summary.budget_used);
        summary.reached_target.push_back(false);
        summary.best_f_per_run.push_back(
            std::numeric_limits<double>::quiet_NaN());
        summary.run_errors.push_back(errors[idx]);
        continue;
      }
      const bool hit = record.termination == "target";
      summary.evals_per_run.push_back(hit ? record.total_evaluations
                                          : summary.budget_used);
      summary.reached_target.push_back(hit);
      summary.best_f_per_run.push_back(record.best_f);
      summary.run_errors.push_back("");
      if (hit) ++successes;
      write_trajectory_csv(run_csv_path(spec.out_dir, cell, r), record);
    }
    summary.median_evals = median_evals(summary.evals_per_run);
    std::vector<std::uint64_t> sorted = summary.evals_per_run;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t median_pos = (sorted.size() - 1) / 2;
    // The median is censored when the median-position run never hit the target.
    std::size_t at_or_below = 0;
    for (int r = 0; r < spec.runs; ++r)
      if (summary.reached_target[r]) ++at_or_below;
    summary.median_censored = at_or_below <= median_pos;
    summary.success_rate = static_cast<double>(successes) / spec.runs;

    std::ofstream out(summary_json_path(spec.out_dir, cell), std::ios::binary);
    if (!out)
      throw std::runtime_error("cannot write summary for cell " + cell.function);
    out << summary.to_json().dump(2) << '\n';
    summaries.push_back(std::move(summary));
  }
  return summaries;
}

}  // namespace harness
}  // namespace lmcma
