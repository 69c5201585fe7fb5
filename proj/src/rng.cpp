#include "lmcma/rng.hpp"

#include <bit>
#include <cmath>

namespace lmcma {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

RandomSource::RandomSource(std::uint64_t seed) : seed_(seed) {
  std::uint64_t sm = seed;
  for (auto& word : s_) word = splitmix64(sm);
}

std::uint64_t RandomSource::next_u64() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RandomSource::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomSource::gaussian() {
  if (has_cached_gaussian_) {
    has_cached_gaussian_ = false;
    return cached_gaussian_;
  }
  double u, v, q;
  do {
    u = 2.0 * uniform01() - 1.0;
    v = 2.0 * uniform01() - 1.0;
    q = u * u + v * v;
  } while (q >= 1.0 || q == 0.0);
  const double f = std::sqrt(-2.0 * std::log(q) / q);
  cached_gaussian_ = v * f;
  has_cached_gaussian_ = true;
  return u * f;
}

double RandomSource::half_normal() { return std::fabs(gaussian()); }

void RandomSource::rademacher(std::span<double> out) {
  std::size_t i = 0;
  while (i < out.size()) {
    std::uint64_t bits = next_u64();
    for (int b = 0; b < 64 && i < out.size(); ++b, ++i)
      out[i] = (bits >> b) & 1u ? 1.0 : -1.0;
  }
}

std::vector<double> RandomSource::rademacher_vector(std::size_t n) {
  std::vector<double> out(n);
  rademacher(out);
  return out;
}

RandomSource RandomSource::substream(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t sm = seed;
  std::uint64_t mixed = splitmix64(sm) ^ (0x9E3779B97F4A7C15ULL * (index + 1));
  std::uint64_t sm2 = mixed;
  return RandomSource(splitmix64(sm2));
}

RandomSource::State RandomSource::save() const {
  return State{s_, seed_, has_cached_gaussian_,
               std::bit_cast<std::uint64_t>(cached_gaussian_)};
}

RandomSource RandomSource::restore(const State& state) {
  RandomSource src;
  src.s_ = state.s;
  src.seed_ = state.seed;
  src.has_cached_gaussian_ = state.has_cached_gaussian;
  src.cached_gaussian_ = std::bit_cast<double>(state.cached_gaussian_bits);
  return src;
}

}  // namespace lmcma
