// Experiment runner: configures one (algorithm, function, dimension) cell,
// executes repeated seeded runs, and writes per-run trajectory CSVs plus a
// JSON summary with the median evaluations-to-target.
//
// Examples:
//   lmcma --function elli --dim 128 --runs 11 --out results/
//   lmcma --algo cholcma --function sphere --dim 32 --budget 200000 --out results/
//   lmcma --function nesterov --dim 128 --preset nesterov --target 1e-6 --out results/

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "lmcma/harness.hpp"
#include "lmcma/kernels.hpp"

int main(int argc, char** argv) {
  CLI::App app{"LM-CMA / Cholesky-CMA-ES benchmark runner"};
  app.set_config("--config", "", "config file with key=value lines; flags override");

  lmcma::harness::ExperimentCell cell;
  lmcma::harness::ExperimentSpec spec;
  std::string m_arg = "default";
  std::string out_dir;
  std::string kernels_arg;
  bool emit_eigenspectrum = false;
  bool deterministic_timing = false;
  bool restarts = false;
  bool print_memory = false;

  app.add_option("--algo", cell.algorithm, "algorithm: lmcma | cholcma")
      ->check(CLI::IsMember({"lmcma", "cholcma"}))
      ->capture_default_str();
  app.add_option("--function", cell.function,
                 "function id: sphere|elli|rosen|discus|cigar|diffpow|nesterov, "
                 "rot_ prefix for rotated variants")
      ->capture_default_str();
  app.add_option("--dim", cell.n, "problem dimension n")->required();
  app.add_option("--m", m_arg, "stored direction vectors: integer, \"2sqrt\", or "
                               "\"default\" (4 + floor(3 ln n))")
      ->capture_default_str();
  app.add_option("--lambda", cell.lambda_override, "population size override");
  app.add_option("--sigma0", cell.sigma0, "initial step-size")->capture_default_str();
  app.add_option("--seed", spec.base_seed, "base seed; run r uses base + r")
      ->capture_default_str();
  app.add_option("--runs", spec.runs, "number of independent runs")
      ->capture_default_str();
  app.add_option("--budget", cell.budget,
                 "max evaluations per run (default 1e4 * n)");
  app.add_option("--target", cell.target, "target objective value")
      ->capture_default_str();
  app.add_option("--preset", cell.preset, "lmcma preset: default | nesterov")
      ->check(CLI::IsMember({"default", "nesterov"}))
      ->capture_default_str();
  app.add_option("--rotation-seed", cell.rotation_seed,
                 "seed of the rotation matrix for rot_* functions")
      ->capture_default_str();
  app.add_option("--out", out_dir, "output directory")->required();
  app.add_flag("--emit-eigenspectrum", emit_eigenspectrum,
               "dump the reconstructed factor's eigenspectrum per run (lmcma, "
               "n <= 2048)");
  app.add_flag("--restarts", restarts, "restart on stagnation");
  app.add_flag("--deterministic-timing", deterministic_timing,
               "write 0 in the ms column so reruns are byte-identical");
  app.add_option("--threads", spec.threads, "worker threads (0 = hardware)");
  app.add_option("--kernels", kernels_arg, "force kernel backend: scalar|avx2|neon");
  app.add_flag("--print-memory-slots", print_memory,
               "print the memory-slot estimate for this configuration and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    if (!kernels_arg.empty()) {
      if (!lmcma::kernels::set_backend(lmcma::kernels::backend_from_name(kernels_arg)))
        throw std::invalid_argument("kernel backend unavailable on this CPU: " +
                                    kernels_arg);
    }
    if (m_arg == "2sqrt")
      cell.m_override = -1;
    else if (m_arg != "default")
      cell.m_override = std::stoi(m_arg);
    if (restarts) cell.restarts = true;

    if (print_memory) {
      const int lambda =
          cell.lambda_override > 0
              ? cell.lambda_override
              : 4 + static_cast<int>(std::floor(3.0 * std::log(double(cell.n))));
      int m = lambda;
      if (cell.m_override == -1)
        m = static_cast<int>(std::floor(2.0 * std::sqrt(double(cell.n))));
      else if (cell.m_override > 0)
        m = cell.m_override;
      std::printf("%llu\n",
                  static_cast<unsigned long long>(lmcma::harness::memory_slots(
                      cell.algorithm, cell.n, m, lambda)));
      return 0;
    }

    spec.cells = {cell};
    spec.out_dir = out_dir;
    spec.deterministic_timing = deterministic_timing;
    spec.emit_eigenspectrum = emit_eigenspectrum;

    const auto summaries = lmcma::harness::run_experiment(spec);
    for (const auto& summary : summaries) {
      std::printf("%s %s n=%d runs=%d median_evals=%llu%s success=%.2f -> %s\n",
                  summary.cell.algorithm.c_str(), summary.cell.function.c_str(),
                  summary.cell.n, spec.runs,
                  static_cast<unsigned long long>(summary.median_evals),
                  summary.median_censored ? " (censored)" : "", summary.success_rate,
                  out_dir.c_str());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
