#ifndef LMCMA_LMFACTOR_HPP
#define LMCMA_LMFACTOR_HPP

#include <atomic>
#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

namespace lmcma {

/// Limited-memory implicit Cholesky factor.
///
/// Holds up to `capacity` direction-vector pairs (p, v) with v the inverse
/// image of p under the factor built from strictly older pairs, plus the
/// per-pair forward/inverse coefficients. Products with the factor and its
/// inverse are reconstructed in O(|positions| * n) by az()/ainvz().
///
/// Temporal positions are 0-based, oldest first: position 0 is the oldest
/// stored pair, position count()-1 the newest. The physical row ("slot") a
/// position maps to is an implementation detail exposed only for tests.
class FactorStore {
 public:
  FactorStore(int dimension, int capacity, double c1);
  FactorStore(const FactorStore& other);
  FactorStore& operator=(const FactorStore& other);

  int dimension() const { return n_; }
  int capacity() const { return capacity_; }
  int count() const { return count_; }
  double c1() const { return c1_; }
  double scale_a() const { return a_; }
  double scale_c_inv() const { return c_inv_; }

  /// out <- A z restricted to the given temporal positions (strictly
  /// increasing, oldest first). The inner products use the original z
  /// throughout. out must not alias z.
  void az(std::span<const double> z, std::span<const int> positions,
          std::span<double> out) const;

  /// out <- A^-1 z restricted to the given temporal positions. The inner
  /// products use the running vector, unlike az(); the asymmetry is part of
  /// the recurrences and deliberate.
  void ainvz(std::span<const double> z, std::span<const int> positions,
             std::span<double> out) const;

  /// All currently stored positions, oldest first.
  std::vector<int> all_positions() const;

  /// Stores p as the newest pair (fill phase). Returns the slot used.
  int append(std::span<const double> p, std::int64_t stamp);

  /// Replaces the pair at the given temporal position with p, makes it the
  /// newest, and recomputes v, b, d for every pair at or after that
  /// position. Returns the slot used.
  int replace_at(int position, std::span<const double> p, std::int64_t stamp);

  /// Refreshes b and d at a slot from the stored v. Returns false when
  /// ||v||^2 falls below the degeneracy guard, in which case the pair
  /// contributes pure scaling (b = d = 0).
  bool update_coefficients(int slot);

  std::int64_t stamp_at(int position) const;
  int slot_at(int position) const;
  std::span<const double> p_at(int position) const;
  std::span<const double> v_at(int position) const;
  double b_at(int position) const;
  double d_at(int position) const;

  /// Inner products performed by az() since the last reset.
  std::uint64_t az_dot_count() const { return az_dots_.load(std::memory_order_relaxed); }
  void reset_az_dot_count() const { az_dots_.store(0, std::memory_order_relaxed); }

  nlohmann::json to_json() const;
  static FactorStore from_json(const nlohmann::json& j);

  static constexpr double kDegenerateEps = 1e-300;

 private:
  void check_positions(std::span<const int> positions) const;
  void recompute_from(int position);

  int n_ = 0;
  int capacity_ = 0;
  int count_ = 0;
  double c1_ = 0.0;
  double a_ = 0.0;      // sqrt(1 - c1)
  double c_inv_ = 0.0;  // 1 / sqrt(1 - c1)

  std::vector<double> p_;  // capacity x n, row-major
  std::vector<double> v_;  // capacity x n, row-major
  std::vector<double> b_;
  std::vector<double> d_;
  std::vector<std::int64_t> stamps_;
  std::vector<int> order_;  // slot per temporal position, oldest first
  std::vector<double> scratch_;

  mutable std::atomic<std::uint64_t> az_dots_{0};
};

}  // namespace lmcma

#endif
