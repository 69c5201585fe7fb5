#ifndef LMCMA_BENCH_HPP
#define LMCMA_BENCH_HPP

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace lmcma {
namespace bench {

enum class FunctionId { sphere, elli, rosen, discus, cigar, diffpow, nesterov };

const char* function_name(FunctionId id);

/// One objective instance: function, dimension, optional rotation, and the
/// standard run protocol (target value, init box, initial step-size).
struct BenchmarkProblem {
  FunctionId function = FunctionId::sphere;
  int dimension = 0;
  bool rotated = false;
  std::shared_ptr<const std::vector<double>> rotation;  // n*n row-major when rotated
  std::uint64_t rotation_seed = 0;

  double target_f = 1e-10;
  double init_lower = -5.0;
  double init_upper = 5.0;
  double sigma0 = 3.0;

  // per-coordinate constants, precomputed so evaluate() stays pure
  std::shared_ptr<const std::vector<double>> elli_weights;
  std::shared_ptr<const std::vector<double>> diffpow_exponents;

  /// "sphere", "elli", ..., "rot_elli", ... Builds the rotation when the
  /// id carries the rot_ prefix.
  static BenchmarkProblem from_name(const std::string& id, int n,
                                    std::uint64_t rotation_seed = 1);
  static BenchmarkProblem make(FunctionId id, int n, bool rotated = false,
                               std::uint64_t rotation_seed = 1);

  std::string name() const;
  void validate() const;
};

/// Objective value at x. Pure and reentrant; rotated variants evaluate the
/// separable function at R*x.
double evaluate(const BenchmarkProblem& problem, std::span<const double> x);

/// Random orthogonal matrix (row-major) from seeded Gaussian sampling and
/// Gram-Schmidt orthonormalization; deterministic per (n, seed).
std::vector<double> make_rotation(int n, std::uint64_t seed, int cap = 2048);

}  // namespace bench
}  // namespace lmcma

#endif
