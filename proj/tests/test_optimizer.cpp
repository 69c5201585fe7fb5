#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "lmcma/bench.hpp"
#include "lmcma/kernels.hpp"
#include "lmcma/optimizer.hpp"
#include "lmcma/run.hpp"

using namespace lmcma;

namespace {

double sphere(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

double rosen(std::span<const double> x) {
  double f = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i)
    f += 100.0 * std::pow(x[i] * x[i] - x[i + 1], 2) + std::pow(x[i] - 1.0, 2);
  return f;
}

bool bits_equal(std::span<const double> a, std::span<const double> b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("default config follows the given-line formulas") {
  auto c = OptimizerConfig::defaults(128);
  CHECK(c.lambda == 4 + static_cast<int>(std::floor(3.0 * std::log(128.0))));
  CHECK(c.lambda == 18);
  CHECK(c.mu == 9);
  CHECK(c.m == 18);
  CHECK(c.n_steps == 128);
  CHECK(c.period == 4);
  CHECK(c.c_c == doctest::Approx(0.5 / std::sqrt(128.0)));
  CHECK(c.c_1 == doctest::Approx(1.0 / (10.0 * std::log(129.0))));
  CHECK(c.z_star == 0.25);
  CHECK(c.c_sigma == 0.3);
  CHECK(c.d_sigma == 1.0);

  double sum = 0.0;
  for (double w : c.weights) sum += w;
  CHECK(std::fabs(sum - 1.0) <= 1e-12);
  for (std::size_t i = 1; i < c.weights.size(); ++i)
    CHECK(c.weights[i] < c.weights[i - 1]);
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("nesterov preset doubles lambda and retunes the learning rates") {
  auto c = OptimizerConfig::nesterov_preset(128);
  auto d = OptimizerConfig::defaults(128);
  CHECK(c.lambda == 2 * d.lambda);
  CHECK(c.c_1 == doctest::Approx(15.0 * d.c_1));
  CHECK(c.c_sigma == doctest::Approx(0.3 / (128.0 * 128.0)));
  CHECK(c.restart_on_stagnation);
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("mirrored pairs satisfy x_even = 2 mean - x_odd bitwise") {
  const int n = 23;
  auto config = OptimizerConfig::defaults(n);
  std::vector<double> mean0(n, 0.7);
  LmCma opt(config, mean0, 2.0, 99u);

  Population pop;
  for (int gen = 0; gen < 30; ++gen) {
    opt.ask(pop);
    const auto mean = opt.mean();
    for (int k = 1; k < config.lambda; k += 2) {
      const auto& odd = pop.members[k - 1];
      const auto& even = pop.members[k];
      CHECK(even.mirrored);
      for (int i = 0; i < n; ++i)
        REQUIRE(even.x[i] == 2.0 * mean[i] - odd.x[i]);
    }
    for (auto& cand : pop.members) cand.fitness = sphere(cand.x);
    opt.tell(pop);
  }
}

TEST_CASE("empty store samples mean + sigma * z with Rademacher pre-image") {
  const int n = 100;
  auto config = OptimizerConfig::defaults(n);
  std::vector<double> mean0(n, 0.0);
  const double sigma0 = 3.0;
  LmCma opt(config, mean0, sigma0, 7u);

  Population pop = opt.ask();
  const auto& first = pop.members[0];
  for (int i = 0; i < n; ++i) {
    CHECK((first.z[i] == 1.0 || first.z[i] == -1.0));
    CHECK(first.x[i] == sigma0 * first.z[i]);
  }
  // ||x1 - m|| = sigma * sqrt(n) exactly for the hypercube pre-image
  CHECK(std::sqrt(sphere(first.x)) == doctest::Approx(sigma0 * 10.0).epsilon(1e-12));
  CHECK(first.subset.m_star == 0);
}

TEST_CASE("mu = 1 moves the mean onto the best candidate") {
  const int n = 8;
  auto config = OptimizerConfig::defaults(n);
  config.mu = 1;
  config.finalize();
  config.validate();
  CHECK(config.weights == std::vector<double>{1.0});

  std::vector<double> mean0(n, 1.0);
  LmCma opt(config, mean0, 0.5, 3u);
  Population pop = opt.ask();
  for (auto& cand : pop.members) cand.fitness = sphere(cand.x);
  double best = pop.members[0].fitness;
  std::size_t best_idx = 0;
  for (std::size_t i = 1; i < pop.members.size(); ++i)
    if (pop.members[i].fitness < best) {
      best = pop.members[i].fitness;
      best_idx = i;
    }
  opt.tell(pop);
  CHECK(bits_equal(opt.mean(), pop.members[best_idx].x));
}

TEST_CASE("c_c = 1 erases the path memory") {
  const int n = 6;
  auto config = OptimizerConfig::defaults(n);
  config.c_c = 1.0 - 1e-16;  // validate() requires (0, 1); this is the limit case
  config.validate();
  std::vector<double> mean0(n, 0.0);
  LmCma opt(config, mean0, 1.0, 11u);
  Population pop = opt.ask();
  for (auto& cand : pop.members) cand.fitness = sphere(cand.x);
  const std::vector<double> mean_before(opt.mean().begin(), opt.mean().end());
  opt.tell(pop);
  // p_c = sqrt(c_c (2 - c_c)) sqrt(mu_w) (mean' - mean) / sigma with the
  // (1 - c_c) term suppressed to ~1e-16.
  const double coef = std::sqrt(config.c_c * (2.0 - config.c_c)) *
                      std::sqrt(config.mu_w);
  for (int i = 0; i < n; ++i) {
    const double want = coef * (opt.mean()[i] - mean_before[i]) / 1.0;
    CHECK(opt.evolution_path()[i] == doctest::Approx(want).epsilon(1e-10));
  }
}

TEST_CASE("monotone transform invariance holds bitwise") {
  const int n = 16;
  auto config = OptimizerConfig::defaults(n);
  std::vector<double> mean0(n, 2.0);

  LmCma raw(config, mean0, 3.0, 4242u);
  LmCma cubed(config, mean0, 3.0, 4242u);

  Population pop_raw, pop_cubed;
  for (int gen = 0; gen < 60; ++gen) {
    raw.ask(pop_raw);
    cubed.ask(pop_cubed);
    for (int i = 0; i < config.lambda; ++i) {
      REQUIRE(bits_equal(pop_raw.members[i].x, pop_cubed.members[i].x));
      const double f = rosen(pop_raw.members[i].x);
      pop_raw.members[i].fitness = f;
      pop_cubed.members[i].fitness = f * f * f;
    }
    raw.tell(pop_raw);
    cubed.tell(pop_cubed);
    REQUIRE(raw.sigma() == cubed.sigma());
    REQUIRE(bits_equal(raw.mean(), cubed.mean()));
  }
}

TEST_CASE("translation contract: shifted objective, shifted start, same run") {
  // Exact in real arithmetic; floating-point addition is not associative,
  // so the trajectories agree to rounding accuracy rather than bitwise.
  const int n = 12;
  auto config = OptimizerConfig::defaults(n);
  std::vector<double> delta(n);
  for (int i = 0; i < n; ++i) delta[i] = 0.25 * (i + 1);

  std::vector<double> mean0(n, 1.0);
  std::vector<double> mean_shifted(n);
  for (int i = 0; i < n; ++i) mean_shifted[i] = mean0[i] + delta[i];

  LmCma base(config, mean0, 2.0, 31u);
  LmCma shifted(config, mean_shifted, 2.0, 31u);
  Population pop_a, pop_b;
  for (int gen = 0; gen < 30; ++gen) {
    base.ask(pop_a);
    shifted.ask(pop_b);
    for (int i = 0; i < config.lambda; ++i) {
      std::vector<double> unshifted(n);
      for (int j = 0; j < n; ++j) unshifted[j] = pop_b.members[i].x[j] - delta[j];
      pop_a.members[i].fitness = sphere(pop_a.members[i].x);
      pop_b.members[i].fitness = sphere(unshifted);
      REQUIRE(pop_a.members[i].fitness ==
              doctest::Approx(pop_b.members[i].fitness).epsilon(1e-9));
    }
    base.tell(pop_a);
    shifted.tell(pop_b);
    REQUIRE(base.sigma() == doctest::Approx(shifted.sigma()).epsilon(1e-9));
  }
}

TEST_CASE("ask consumes rng in the documented order") {
  // Reconstruct the first odd candidate's draws by replaying the stream:
  // subset gaussian first, then the Rademacher words.
  const int n = 10;
  auto config = OptimizerConfig::defaults(n);
  std::vector<double> mean0(n, 0.0);
  const std::uint64_t seed = 555;
  LmCma opt(config, mean0, 1.0, seed);
  Population pop = opt.ask();

  RandomSource replay(seed);
  (void)replay.half_normal();  // subset draw for k = 1
  auto z = replay.rademacher_vector(n);
  CHECK(bits_equal(pop.members[0].z, z));
}

TEST_CASE("per-candidate reconstruction cost stays at or below m") {
  const int n = 24;
  auto config = OptimizerConfig::defaults(n);
  std::vector<double> mean0(n, 1.0);
  LmCma opt(config, mean0, 1.5, 17u);

  Population pop;
  for (int gen = 0; gen < 50; ++gen) {
    opt.factor().reset_az_dot_count();
    opt.ask(pop);
    const std::uint64_t dots = opt.factor().az_dot_count();
    const std::uint64_t odd_candidates = (config.lambda + 1) / 2;
    REQUIRE(dots <= odd_candidates * static_cast<std::uint64_t>(config.m));
    for (auto& cand : pop.members) cand.fitness = sphere(cand.x);
    opt.tell(pop);
  }
}

TEST_CASE("average subset scale matches the half-normal mean") {
  // mean of m_sigma * |N(0,1)| over many draws is m_sigma * sqrt(2/pi).
  RandomSource rng(2025);
  const double m_sigma = 4.0;
  double sum = 0.0;
  const int draws = 1000;
  for (int i = 0; i < draws; ++i) sum += m_sigma * rng.half_normal();
  const double mean = sum / draws;
  const double want = m_sigma * std::sqrt(2.0 / M_PI);
  CHECK(std::fabs(mean - want) <= 0.1 * want);
}

TEST_CASE("tell validates fitness and population shape") {
  const int n = 5;
  auto config = OptimizerConfig::defaults(n);
  std::vector<double> mean0(n, 0.0);
  LmCma opt(config, mean0, 1.0, 1u);
  Population pop = opt.ask();
  CHECK_THROWS_AS(opt.tell(pop), std::invalid_argument);  // fitness unset (NaN)
  for (auto& cand : pop.members) cand.fitness = 1.0;
  Population stale = pop;
  opt.tell(pop);
  CHECK_THROWS_AS(opt.tell(stale), std::invalid_argument);  // generation mismatch
}

TEST_CASE("best-so-far is non-increasing and counters advance") {
  const int n = 14;
  auto config = OptimizerConfig::defaults(n);
  std::vector<double> mean0(n, 3.0);
  LmCma opt(config, mean0, 2.0, 8u);
  double last_best = std::numeric_limits<double>::infinity();
  Population pop;
  for (int gen = 0; gen < 80; ++gen) {
    opt.ask(pop);
    for (auto& cand : pop.members) cand.fitness = sphere(cand.x);
    opt.tell(pop);
    REQUIRE(opt.best_fitness() <= last_best);
    last_best = opt.best_fitness();
    REQUIRE(opt.evaluations() ==
            static_cast<std::uint64_t>(config.lambda) * (gen + 1));
  }
  CHECK(opt.iteration() == 80);
}

TEST_CASE("checkpoint round-trips bit-exactly and resumes identically") {
  const int n = 11;
  auto config = OptimizerConfig::defaults(n);
  std::vector<double> mean0(n, -1.0);
  LmCma opt(config, mean0, 1.0, 12345u);
  Population pop;
  for (int gen = 0; gen < 25; ++gen) {
    opt.ask(pop);
    for (auto& cand : pop.members) cand.fitness = rosen(cand.x);
    opt.tell(pop);
  }

  const std::string dumped = opt.checkpoint().dump();
  LmCma restored = LmCma::restore(nlohmann::json::parse(dumped));
  CHECK(bits_equal(opt.mean(), restored.mean()));
  CHECK(opt.sigma() == restored.sigma());
  CHECK(opt.evaluations() == restored.evaluations());

  Population pa, pb;
  for (int gen = 0; gen < 10; ++gen) {
    opt.ask(pa);
    restored.ask(pb);
    for (int i = 0; i < config.lambda; ++i) {
      REQUIRE(bits_equal(pa.members[i].x, pb.members[i].x));
      pa.members[i].fitness = rosen(pa.members[i].x);
      pb.members[i].fitness = pa.members[i].fitness;
    }
    opt.tell(pa);
    restored.tell(pb);
    REQUIRE(opt.sigma() == restored.sigma());
  }
}

TEST_CASE("kernel backend does not change the trajectory") {
  const auto backends = kernels::available_backends();
  if (backends.size() < 2) return;  // nothing to compare on this CPU

  const int n = 37;  // odd size exercises the vector tails
  auto config = OptimizerConfig::defaults(n);
  std::vector<double> mean0(n, 0.5);

  std::vector<std::vector<double>> sigmas;
  std::vector<std::vector<double>> means;
  for (kernels::Backend b : backends) {
    REQUIRE(kernels::set_backend(b));
    LmCma opt(config, mean0, 2.0, 777u);
    Population pop;
    std::vector<double> sig;
    for (int gen = 0; gen < 40; ++gen) {
      opt.ask(pop);
      for (auto& cand : pop.members) cand.fitness = rosen(cand.x);
      opt.tell(pop);
      sig.push_back(opt.sigma());
    }
    sigmas.push_back(std::move(sig));
    means.emplace_back(opt.mean().begin(), opt.mean().end());
  }
  kernels::set_backend(backends.back());
  for (std::size_t i = 1; i < sigmas.size(); ++i) {
    REQUIRE(bits_equal(sigmas[0], sigmas[i]));
    REQUIRE(bits_equal(means[0], means[i]));
  }
}

TEST_CASE("optimize solves a small sphere and reports its termination") {
  auto problem = bench::BenchmarkProblem::from_name("sphere", 16);
  auto config = OptimizerConfig::defaults(16);
  OptimizeOptions options;
  options.deterministic_timing = true;
  RunRecord record = optimize(config, problem, 100000, 1e-10, 1u, options);
  CHECK(record.termination == "target");
  CHECK(record.best_f <= 1e-10);
  CHECK(record.total_evaluations < 100000);

  // trajectory invariants
  for (std::size_t i = 1; i < record.rows.size(); ++i) {
    REQUIRE(record.rows[i].evaluations > record.rows[i - 1].evaluations);
    REQUIRE(record.rows[i].best_f <= record.rows[i - 1].best_f);
  }
}

TEST_CASE("optimize honors a one-generation budget") {
  auto problem = bench::BenchmarkProblem::from_name("sphere", 16);
  auto config = OptimizerConfig::defaults(16);
  const auto lambda = static_cast<std::uint64_t>(config.lambda);
  RunRecord record = optimize(config, problem, lambda, 1e-30, 2u);
  CHECK(record.termination == "budget");
  CHECK(record.total_evaluations == lambda);
  CHECK_THROWS_AS(optimize(config, problem, lambda - 1, 1e-10, 2u),
                  std::invalid_argument);
}

TEST_CASE("already-met target stops after the first generation") {
  auto problem = bench::BenchmarkProblem::from_name("sphere", 16);
  auto config = OptimizerConfig::defaults(16);
  RunRecord record = optimize(config, problem, 100000, 1e6, 3u);
  CHECK(record.termination == "target");
  CHECK(record.total_evaluations == static_cast<std::uint64_t>(config.lambda));
}

TEST_CASE("stagnation stops a stuck run and restarts keep it alive") {
  // The nonsmooth Nesterov variant under the default configuration gets
  // stuck far from the optimum; the step-size then collapses and the best
  // value freezes.
  const int n = 16;
  auto problem = bench::BenchmarkProblem::from_name("nesterov", n);
  auto config = OptimizerConfig::defaults(n);
  OptimizeOptions options;
  options.deterministic_timing = true;

  RunRecord record = optimize(config, problem, 2000000, 1e-10, 5u, options);
  CHECK(record.termination == "stagnation");
  CHECK(record.best_f > 1e-10);

  options.restarts = true;
  RunRecord restarted = optimize(config, problem, record.total_evaluations * 3,
                                 1e-10, 5u, options);
  CHECK(restarted.restarts > 0);
}
