#include "lmcma/bench.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "lmcma/kernels.hpp"
#include "lmcma/linalg.hpp"
#include "lmcma/rng.hpp"

namespace lmcma {
namespace bench {

namespace {

double sphere_at(std::span<const double> y) { return kernels::dot(y, y); }

double elli_at(std::span<const double> y, const std::vector<double>& w) {
  return kernels::weighted_sum_sq(w, y);
}

double rosen_at(std::span<const double> y) {
  double f = 0.0;
  for (std::size_t i = 0; i + 1 < y.size(); ++i) {
    const double a = y[i] * y[i] - y[i + 1];
    const double b = y[i] - 1.0;
    f += 100.0 * (a * a) + b * b;
  }
  return f;
}

double discus_at(std::span<const double> y) {
  auto tail = y.subspan(1);
  return 1e6 * (y[0] * y[0]) + kernels::dot(tail, tail);
}

double cigar_at(std::span<const double> y) {
  auto tail = y.subspan(1);
  return y[0] * y[0] + 1e6 * kernels::dot(tail, tail);
}

double diffpow_at(std::span<const double> y, const std::vector<double>& p) {
  double f = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) f += std::pow(std::fabs(y[i]), p[i]);
  return f;
}

double nesterov_at(std::span<const double> y) {
  double f = 0.25 * std::fabs(y[0] - 1.0);
  for (std::size_t i = 0; i + 1 < y.size(); ++i)
    f += std::fabs(y[i + 1] - 2.0 * std::fabs(y[i]) + 1.0);
  return f;
}

double dispatch_function(const BenchmarkProblem& problem, std::span<const double> y) {
  switch (problem.function) {
    case FunctionId::sphere:
      return sphere_at(y);
    case FunctionId::elli:
      return elli_at(y, *problem.elli_weights);
    case FunctionId::rosen:
      return rosen_at(y);
    case FunctionId::discus:
      return discus_at(y);
    case FunctionId::cigar:
      return cigar_at(y);
    case FunctionId::diffpow:
      return diffpow_at(y, *problem.diffpow_exponents);
    case FunctionId::nesterov:
      return nesterov_at(y);
  }
  throw std::logic_error("unhandled function id");
}

FunctionId function_from_name(const std::string& base) {
  if (base == "sphere") return FunctionId::sphere;
  if (base == "elli") return FunctionId::elli;
  if (base == "rosen") return FunctionId::rosen;
  if (base == "discus") return FunctionId::discus;
  if (base == "cigar") return FunctionId::cigar;
  if (base == "diffpow") return FunctionId::diffpow;
  if (base == "nesterov") return FunctionId::nesterov;
  throw std::invalid_argument(
      "unknown function id: " + base +
      " (expected sphere|elli|rosen|discus|cigar|diffpow|nesterov, optionally "
      "rot_-prefixed except sphere and nesterov)");
}

}  // namespace

const char* function_name(FunctionId id) {
  switch (id) {
    case FunctionId::sphere:
      return "sphere";
    case FunctionId::elli:
      return "elli";
    case FunctionId::rosen:
      return "rosen";
    case FunctionId::discus:
      return "discus";
    case FunctionId::cigar:
      return "cigar";
    case FunctionId::diffpow:
      return "diffpow";
    case FunctionId::nesterov:
      return "nesterov";
  }
  return "unknown";
}

BenchmarkProblem BenchmarkProblem::make(FunctionId id, int n, bool rotated,
                                        std::uint64_t rotation_seed) {
  if (n < 2) throw std::invalid_argument("problem dimension must be >= 2");
  BenchmarkProblem p;
  p.function = id;
  p.dimension = n;
  if (rotated) {
    if (id == FunctionId::sphere || id == FunctionId::nesterov)
      throw std::invalid_argument(std::string("no rotated variant of ") +
                                  function_name(id));
    p.rotated = true;
    p.rotation_seed = rotation_seed;
    p.rotation =
        std::make_shared<const std::vector<double>>(make_rotation(n, rotation_seed));
  }
  if (id == FunctionId::elli) {
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i)
      w[i] = std::pow(10.0, 6.0 * static_cast<double>(i) / (n - 1));
    p.elli_weights = std::make_shared<const std::vector<double>>(std::move(w));
  }
  if (id == FunctionId::diffpow) {
    std::vector<double> e(n);
    for (int i = 0; i < n; ++i)
      e[i] = 2.0 + 4.0 * static_cast<double>(i) / (n - 1);
    p.diffpow_exponents = std::make_shared<const std::vector<double>>(std::move(e));
  }
  return p;
}

BenchmarkProblem BenchmarkProblem::from_name(const std::string& id, int n,
                                             std::uint64_t rotation_seed) {
  bool rotated = id.rfind("rot_", 0) == 0;
  std::string base = rotated ? id.substr(4) : id;
  return make(function_from_name(base), n, rotated, rotation_seed);
}

std::string BenchmarkProblem::name() const {
  return (rotated ? std::string("rot_") : std::string()) + function_name(function);
}

void BenchmarkProblem::validate() const {
  if (dimension < 2) throw std::invalid_argument("dimension must be >= 2");
  if (!(target_f > 0.0)) throw std::invalid_argument("target_f must be > 0");
  if (!(init_lower < init_upper))
    throw std::invalid_argument("init_lower must be < init_upper");
  if (!(sigma0 > 0.0)) throw std::invalid_argument("sigma0 must be > 0");
  if (rotated) {
    const std::size_t n = static_cast<std::size_t>(dimension);
    if (!rotation || rotation->size() != n * n)
      throw std::invalid_argument("rotation matrix missing or wrongly sized");
    // max |R^T R - I| <= 1e-12, checked on a transposed copy so the column
    // inner products are contiguous.
    std::vector<double> rt(n * n);
    const std::vector<double>& r = *rotation;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) rt[j * n + i] = r[i * n + j];
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        double v = kernels::dot(std::span<const double>(rt).subspan(i * n, n),
                                std::span<const double>(rt).subspan(j * n, n));
        double err = std::fabs(v - (i == j ? 1.0 : 0.0));
        if (err > 1e-12)
          throw std::invalid_argument("rotation matrix is not orthogonal");
      }
    }
  }
}

double evaluate(const BenchmarkProblem& problem, std::span<const double> x) {
  const std::size_t n = static_cast<std::size_t>(problem.dimension);
  if (x.size() != n)
    throw std::invalid_argument("evaluate: x has length " + std::to_string(x.size()) +
                                ", expected " + std::to_string(n));
  for (double v : x)
    if (!std::isfinite(v))
      throw std::invalid_argument("evaluate: non-finite input component");

  if (!problem.rotated) return dispatch_function(problem, x);

  if (!problem.rotation || problem.rotation->size() != n * n)
    throw std::invalid_argument("evaluate: rotation matrix missing");
  thread_local std::vector<double> scratch;
  scratch.resize(n);
  kernels::matvec(scratch, *problem.rotation, n, n, x);
  return dispatch_function(problem, std::span<const double>(scratch));
}

std::vector<double> make_rotation(int n, std::uint64_t seed, int cap) {
  if (n < 2) throw std::invalid_argument("make_rotation: n must be >= 2");
  if (n > cap)
    throw std::length_error("make_rotation: n = " + std::to_string(n) +
                            " exceeds the rotation cap " + std::to_string(cap));
  const std::size_t nn = static_cast<std::size_t>(n);
  std::vector<double> r(nn * nn);
  RandomSource src(seed);
  for (double& v : r) v = src.gaussian();
  // Two Gram-Schmidt passes keep the orthogonality error well under the
  // 1e-12 contract.
  for (int pass = 0; pass < 2; ++pass) {
    if (linalg::orthonormalize_rows(r, nn, nn) != nn)
      throw std::runtime_error("make_rotation: rank-deficient Gaussian draw");
  }
  return r;
}

}  // namespace bench
}  // namespace lmcma
