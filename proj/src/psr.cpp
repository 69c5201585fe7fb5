#include "lmcma/psr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace lmcma {
namespace psr {

void PsrParams::validate() const {
  if (!(c_sigma > 0.0 && c_sigma < 1.0))
    throw std::invalid_argument("PsrParams: c_sigma must be in (0, 1)");
  if (!(d_sigma > 0.0)) throw std::invalid_argument("PsrParams: d_sigma must be > 0");
  if (!std::isfinite(z_star)) throw std::invalid_argument("PsrParams: z_star");
}

double PsrState::z_psr(std::span<const double> prev_fitness,
                       std::span<const double> curr_fitness, double z_star) {
  const std::size_t lambda = curr_fitness.size();
  if (prev_fitness.size() != lambda)
    throw std::invalid_argument("z_psr: fitness lists must have equal length");
  if (lambda == 0) throw std::invalid_argument("z_psr: empty fitness lists");

  // Merged ranking, previous-generation entries first so a stable sort
  // resolves ties in their favor.
  struct Entry {
    double value;
    bool current;
  };
  std::vector<Entry> merged;
  merged.reserve(2 * lambda);
  for (double f : prev_fitness) merged.push_back({f, false});
  for (double f : curr_fitness) merged.push_back({f, true});
  std::stable_sort(merged.begin(), merged.end(),
                   [](const Entry& a, const Entry& b) { return a.value < b.value; });

  std::int64_t rank_diff = 0;  // sum of previous ranks minus current ranks
  for (std::size_t r = 0; r < merged.size(); ++r)
    rank_diff += merged[r].current ? -static_cast<std::int64_t>(r)
                                   : static_cast<std::int64_t>(r);
  const double lam = static_cast<double>(lambda);
  return static_cast<double>(rank_diff) / (lam * lam) - z_star;
}

double PsrState::update(const PsrParams& params, std::span<const double> curr_fitness,
                        double sigma) {
  params.validate();
  if (curr_fitness.empty()) throw std::invalid_argument("psr: empty fitness list");
  for (double f : curr_fitness)
    if (!std::isfinite(f)) throw std::invalid_argument("psr: non-finite fitness");
  if (!(sigma > 0.0)) throw std::invalid_argument("psr: sigma must be > 0");

  if (!seeded_) {
    prev_fitness_.assign(curr_fitness.begin(), curr_fitness.end());
    seeded_ = true;
    return sigma;
  }
  if (prev_fitness_.size() != curr_fitness.size())
    throw std::invalid_argument("psr: fitness list length changed between calls");

  const double z = z_psr(prev_fitness_, curr_fitness, params.z_star);
  s_ = (1.0 - params.c_sigma) * s_ + params.c_sigma * z;
  double next = sigma * std::exp(s_ / params.d_sigma);
  if (!(next > 0.0)) next = 1e-300;  // keep the step-size strictly positive
  prev_fitness_.assign(curr_fitness.begin(), curr_fitness.end());
  return next;
}

nlohmann::json PsrState::to_json() const {
  return nlohmann::json{
      {"s", s_}, {"prev_fitness", prev_fitness_}, {"seeded", seeded_}};
}

PsrState PsrState::from_json(const nlohmann::json& j) {
  PsrState state;
  state.s_ = j.at("s").get<double>();
  state.prev_fitness_ = j.at("prev_fitness").get<std::vector<double>>();
  state.seeded_ = j.at("seeded").get<bool>();
  return state;
}

}  // namespace psr
}  // namespace lmcma
