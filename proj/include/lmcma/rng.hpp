#ifndef LMCMA_RNG_HPP
#define LMCMA_RNG_HPP

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace lmcma {

/// Deterministic random source (xoshiro256++ seeded via splitmix64).
///
/// A fixed seed yields the same draw sequence on every platform; the
/// generator state is plain integer arithmetic and serializes exactly.
/// Consumers draw in a documented order (per candidate: subset size first,
/// then the pre-image vector) so whole optimizer trajectories replay
/// bit for bit.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64();

  /// Uniform draw in [0, 1) with 53 random bits.
  double uniform01();

  /// Standard normal draw (Marsaglia polar method, second value cached).
  double gaussian();

  /// |N(0,1)| draw.
  double half_normal();

  /// Fills out with independent +-1 entries, one stream word per 64 signs.
  void rademacher(std::span<double> out);
  std::vector<double> rademacher_vector(std::size_t n);

  /// Independent stream derived from (seed, index); used to hand each
  /// parallel worker its own source.
  static RandomSource substream(std::uint64_t seed, std::uint64_t index);

  struct State {
    std::array<std::uint64_t, 4> s;
    std::uint64_t seed;
    bool has_cached_gaussian;
    std::uint64_t cached_gaussian_bits;
  };
  State save() const;
  static RandomSource restore(const State& state);

 private:
  RandomSource() = default;

  std::array<std::uint64_t, 4> s_{};
  std::uint64_t seed_ = 0;
  bool has_cached_gaussian_ = false;
  double cached_gaussian_ = 0.0;
};

}  // namespace lmcma

#endif
