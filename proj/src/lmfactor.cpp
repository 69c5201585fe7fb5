#include "lmcma/lmfactor.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

#include "lmcma/kernels.hpp"

namespace lmcma {

FactorStore::FactorStore(int dimension, int capacity, double c1)
    : n_(dimension), capacity_(capacity), c1_(c1) {
  if (dimension < 1) throw std::invalid_argument("FactorStore: dimension must be >= 1");
  if (capacity < 1) throw std::invalid_argument("FactorStore: capacity must be >= 1");
  if (!(c1 > 0.0 && c1 < 1.0))
    throw std::invalid_argument("FactorStore: c1 must be in (0, 1)");
  a_ = std::sqrt(1.0 - c1_);
  c_inv_ = 1.0 / a_;
  const std::size_t mn = static_cast<std::size_t>(capacity) * dimension;
  p_.assign(mn, 0.0);
  v_.assign(mn, 0.0);
  b_.assign(capacity, 0.0);
  d_.assign(capacity, 0.0);
  stamps_.assign(capacity, 0);
  order_.reserve(capacity);
  scratch_.assign(dimension, 0.0);
}

FactorStore::FactorStore(const FactorStore& other)
    : n_(other.n_),
      capacity_(other.capacity_),
      count_(other.count_),
      c1_(other.c1_),
      a_(other.a_),
      c_inv_(other.c_inv_),
      p_(other.p_),
      v_(other.v_),
      b_(other.b_),
      d_(other.d_),
      stamps_(other.stamps_),
      order_(other.order_),
      scratch_(other.scratch_),
      az_dots_(other.az_dots_.load(std::memory_order_relaxed)) {}

FactorStore& FactorStore::operator=(const FactorStore& other) {
  if (this == &other) return *this;
  n_ = other.n_;
  capacity_ = other.capacity_;
  count_ = other.count_;
  c1_ = other.c1_;
  a_ = other.a_;
  c_inv_ = other.c_inv_;
  p_ = other.p_;
  v_ = other.v_;
  b_ = other.b_;
  d_ = other.d_;
  stamps_ = other.stamps_;
  order_ = other.order_;
  scratch_ = other.scratch_;
  az_dots_.store(other.az_dots_.load(std::memory_order_relaxed),
                 std::memory_order_relaxed);
  return *this;
}

void FactorStore::check_positions(std::span<const int> positions) const {
  int prev = -1;
  for (int t : positions) {
    if (t < 0 || t >= count_)
      throw std::invalid_argument("FactorStore: position out of range");
    if (t <= prev)
      throw std::invalid_argument("FactorStore: positions must be strictly increasing");
    prev = t;
  }
}

void FactorStore::az(std::span<const double> z, std::span<const int> positions,
                     std::span<double> out) const {
  if (z.size() != static_cast<std::size_t>(n_) || out.size() != z.size())
    throw std::invalid_argument("FactorStore::az: dimension mismatch");
  assert(out.data() != z.data());
  check_positions(positions);

  std::copy(z.begin(), z.end(), out.begin());
  for (int t : positions) {
    const int slot = order_[t];
    auto v_row = std::span<const double>(v_).subspan(
        static_cast<std::size_t>(slot) * n_, n_);
    auto p_row = std::span<const double>(p_).subspan(
        static_cast<std::size_t>(slot) * n_, n_);
    const double k = b_[slot] * kernels::dot(v_row, z);
    kernels::scale_axpy(out, a_, k, p_row);
  }
  az_dots_.fetch_add(positions.size(), std::memory_order_relaxed);
}

void FactorStore::ainvz(std::span<const double> z, std::span<const int> positions,
                        std::span<double> out) const {
  if (z.size() != static_cast<std::size_t>(n_) || out.size() != z.size())
    throw std::invalid_argument("FactorStore::ainvz: dimension mismatch");
  check_positions(positions);

  if (out.data() != z.data()) std::copy(z.begin(), z.end(), out.begin());
  for (int t : positions) {
    const int slot = order_[t];
    auto v_row = std::span<const double>(v_).subspan(
        static_cast<std::size_t>(slot) * n_, n_);
    const double k = d_[slot] * kernels::dot(v_row, std::span<const double>(out));
    kernels::scale_axpy(out, c_inv_, -k, v_row);
  }
}

std::vector<int> FactorStore::all_positions() const {
  std::vector<int> positions(count_);
  for (int i = 0; i < count_; ++i) positions[i] = i;
  return positions;
}

int FactorStore::append(std::span<const double> p, std::int64_t stamp) {
  if (count_ >= capacity_) throw std::logic_error("FactorStore::append: store full");
  if (p.size() != static_cast<std::size_t>(n_))
    throw std::invalid_argument("FactorStore::append: dimension mismatch");
  const int slot = count_;
  std::copy(p.begin(), p.end(),
            p_.begin() + static_cast<std::size_t>(slot) * n_);
  stamps_[slot] = stamp;
  order_.push_back(slot);
  ++count_;
  recompute_from(count_ - 1);
  return slot;
}

int FactorStore::replace_at(int position, std::span<const double> p,
                            std::int64_t stamp) {
  if (position < 0 || position >= count_)
    throw std::invalid_argument("FactorStore::replace_at: position out of range");
  if (p.size() != static_cast<std::size_t>(n_))
    throw std::invalid_argument("FactorStore::replace_at: dimension mismatch");
  const int slot = order_[position];
  order_.erase(order_.begin() + position);
  order_.push_back(slot);
  std::copy(p.begin(), p.end(),
            p_.begin() + static_cast<std::size_t>(slot) * n_);
  stamps_[slot] = stamp;
  recompute_from(position);
  return slot;
}

void FactorStore::recompute_from(int position) {
  // v at position q is the inverse image of p under the factor built from
  // the pairs strictly older than q, so the refresh must run oldest first.
  std::vector<int> positions(count_);
  for (int i = 0; i < count_; ++i) positions[i] = i;
  for (int q = position; q < count_; ++q) {
    const int slot = order_[q];
    auto p_row = std::span<const double>(p_).subspan(
        static_cast<std::size_t>(slot) * n_, n_);
    ainvz(p_row, std::span<const int>(positions).first(q), scratch_);
    std::copy(scratch_.begin(), scratch_.end(),
              v_.begin() + static_cast<std::size_t>(slot) * n_);
    update_coefficients(slot);
  }
}

bool FactorStore::update_coefficients(int slot) {
  if (slot < 0 || slot >= capacity_)
    throw std::invalid_argument("FactorStore::update_coefficients: bad slot");
  auto v_row = std::span<const double>(v_).subspan(
      static_cast<std::size_t>(slot) * n_, n_);
  const double nv = kernels::dot(v_row, v_row);
  if (!(nv > kDegenerateEps)) {
    // Degenerate pair: the update degrades to pure scaling by a.
    b_[slot] = 0.0;
    d_[slot] = 0.0;
    return false;
  }
  const double root = std::sqrt(1.0 + (c1_ / (1.0 - c1_)) * nv);
  b_[slot] = (a_ / nv) * (root - 1.0);
  d_[slot] = (1.0 / (a_ * nv)) * (1.0 - 1.0 / root);
  return true;
}

std::int64_t FactorStore::stamp_at(int position) const {
  if (position < 0 || position >= count_)
    throw std::invalid_argument("FactorStore::stamp_at: position out of range");
  return stamps_[order_[position]];
}

int FactorStore::slot_at(int position) const {
  if (position < 0 || position >= count_)
    throw std::invalid_argument("FactorStore::slot_at: position out of range");
  return order_[position];
}

std::span<const double> FactorStore::p_at(int position) const {
  return std::span<const double>(p_).subspan(
      static_cast<std::size_t>(slot_at(position)) * n_, n_);
}

std::span<const double> FactorStore::v_at(int position) const {
  return std::span<const double>(v_).subspan(
      static_cast<std::size_t>(slot_at(position)) * n_, n_);
}

double FactorStore::b_at(int position) const { return b_[slot_at(position)]; }

double FactorStore::d_at(int position) const { return d_[slot_at(position)]; }

nlohmann::json FactorStore::to_json() const {
  return nlohmann::json{{"n", n_},          {"capacity", capacity_},
                        {"count", count_},  {"c1", c1_},
                        {"p", p_},          {"v", v_},
                        {"b", b_},          {"d", d_},
                        {"stamps", stamps_}, {"order", order_}};
}

FactorStore FactorStore::from_json(const nlohmann::json& j) {
  FactorStore store(j.at("n").get<int>(), j.at("capacity").get<int>(),
                    j.at("c1").get<double>());
  store.count_ = j.at("count").get<int>();
  store.p_ = j.at("p").get<std::vector<double>>();
  store.v_ = j.at("v").get<std::vector<double>>();
  store.b_ = j.at("b").get<std::vector<double>>();
  store.d_ = j.at("d").get<std::vector<double>>();
  store.stamps_ = j.at("stamps").get<std::vector<std::int64_t>>();
  store.order_ = j.at("order").get<std::vector<int>>();
  const std::size_t mn = static_cast<std::size_t>(store.capacity_) * store.n_;
  if (store.p_.size() != mn || store.v_.size() != mn ||
      store.order_.size() != static_cast<std::size_t>(store.count_))
    throw std::invalid_argument("FactorStore::from_json: inconsistent payload");
  return store;
}

}  // namespace lmcma
