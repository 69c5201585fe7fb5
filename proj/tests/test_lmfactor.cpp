#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "lmcma/kernels.hpp"
#include "lmcma/lmfactor.hpp"
#include "lmcma/rng.hpp"
#include "oracle.hpp"

using lmcma::FactorStore;
using lmcma::RandomSource;

namespace {

std::vector<double> gaussian_vec(RandomSource& rng, int n) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.gaussian();
  return v;
}

FactorStore filled_store(RandomSource& rng, int n, int m, double c1, int count,
                         oracle::DenseFactor* dense = nullptr) {
  FactorStore store(n, m, c1);
  for (int i = 0; i < count; ++i) {
    auto p = gaussian_vec(rng, n);
    store.append(p, i);
    if (dense) dense->push(p);
  }
  return store;
}

}  // namespace

TEST_CASE("empty index set leaves z unchanged") {
  FactorStore store(5, 4, 0.1);
  std::vector<double> z = {1, -2, 3, -4, 5};
  std::vector<double> out(5);
  store.az(z, {}, out);
  CHECK(out == z);
  store.ainvz(z, {}, out);
  CHECK(out == z);
}

TEST_CASE("single unit pair reproduces the hand algebra") {
  // p = v = e1, so b = 1 - a and A e1 = (a + b) e1 = e1.
  const int n = 4;
  FactorStore store(n, 3, 0.25);
  std::vector<double> e1 = {1, 0, 0, 0};
  store.append(e1, 0);
  REQUIRE(store.count() == 1);

  for (int i = 0; i < n; ++i) {
    CHECK(store.v_at(0)[i] == e1[i]);  // empty prefix: v = p exactly
  }
  const double a = store.scale_a();
  CHECK(store.b_at(0) == doctest::Approx(1.0 - a).epsilon(1e-15));

  std::vector<double> out(n);
  const int idx[] = {0};
  store.az(e1, idx, out);
  CHECK(out[0] == doctest::Approx(1.0).epsilon(1e-15));  // a + b = 1 for unit v
  CHECK(out[1] == 0.0);

  store.ainvz(e1, idx, out);
  CHECK(out[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("coefficient closed forms at ||v||^2 = 1, c1 = 0.75") {
  FactorStore store(2, 1, 0.75);
  std::vector<double> e1 = {1, 0};
  store.append(e1, 0);
  CHECK(store.b_at(0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(store.d_at(0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("coefficients vanish as c1 goes to zero") {
  FactorStore store(2, 1, 1e-14);
  std::vector<double> e1 = {1, 0};
  store.append(e1, 0);
  CHECK(std::fabs(store.b_at(0)) < 1e-9);
  CHECK(std::fabs(store.d_at(0)) < 1e-9);
}

TEST_CASE("degenerate direction vector signals and falls back to scaling") {
  FactorStore store(3, 2, 0.3);
  std::vector<double> zero(3, 0.0);
  store.append(zero, 0);
  CHECK(store.b_at(0) == 0.0);
  CHECK(store.d_at(0) == 0.0);
  CHECK_FALSE(store.update_coefficients(store.slot_at(0)));

  // Pure scaling: az multiplies by a, ainvz by 1/a.
  std::vector<double> z = {1, 2, 3};
  std::vector<double> out(3);
  const int idx[] = {0};
  store.az(z, idx, out);
  for (int i = 0; i < 3; ++i) CHECK(out[i] == store.scale_a() * z[i]);
}

TEST_CASE("dense-oracle equivalence over random states and subsets") {
  RandomSource rng(20250810);
  for (int rep = 0; rep < 25; ++rep) {
    const int n = 3 + static_cast<int>(rng.next_u64() % 30);
    const int m = 1 + static_cast<int>(rng.next_u64() % 8);
    const double c1 = 0.02 + 0.5 * rng.uniform01();
    oracle::DenseFactor dense(n, c1);
    FactorStore store = filled_store(rng, n, m, c1, m, &dense);

    auto z = gaussian_vec(rng, n);
    std::vector<double> got(n);
    store.az(z, store.all_positions(), got);
    auto want = oracle::matvec(dense.a, z);
    CHECK(oracle::rel_err(got, want) <= 1e-9);

    store.ainvz(z, store.all_positions(), got);
    auto want_inv = oracle::matvec(dense.a_inv, z);
    CHECK(oracle::rel_err(got, want_inv) <= 1e-9);
  }
}

TEST_CASE("spec example: two pairs in 3 dimensions match the dense factor") {
  RandomSource rng(99);
  const int n = 3;
  oracle::DenseFactor dense(n, 0.2);
  FactorStore store = filled_store(rng, n, 2, 0.2, 2, &dense);
  auto z = gaussian_vec(rng, n);
  std::vector<double> got(n);
  const int idx[] = {0, 1};
  store.az(z, idx, got);
  auto want = oracle::matvec(dense.a, z);
  CHECK(oracle::rel_err(got, want) <= 1e-9);
}

TEST_CASE("omitting a position equals a dense factor with that update removed") {
  RandomSource rng(4242);
  const int n = 12, m = 5;
  const double c1 = 0.15;
  std::vector<std::vector<double>> ps;
  FactorStore store(n, m, c1);
  for (int i = 0; i < m; ++i) {
    ps.push_back(gaussian_vec(rng, n));
    store.append(ps.back(), i);
  }
  // Drop position 2: the remaining recurrence steps replayed with the same
  // kernels must reproduce az() bit for bit, since an omitted position is
  // exactly a skipped loop body (its update's learning rate set to zero).
  std::vector<int> subset = {0, 1, 3, 4};
  auto z = gaussian_vec(rng, n);
  std::vector<double> got(n);
  store.az(z, subset, got);

  const double a = store.scale_a();
  std::vector<double> want = z;
  for (int t : subset) {
    const double k = store.b_at(t) * lmcma::kernels::dot(store.v_at(t), z);
    lmcma::kernels::scale_axpy(want, a, k, store.p_at(t));
  }
  for (int i = 0; i < n; ++i) CHECK(got[i] == want[i]);
}

TEST_CASE("round trip over random states") {
  RandomSource rng(31337);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 8 + static_cast<int>(rng.next_u64() % 40);
    const int m = 2 + static_cast<int>(rng.next_u64() % 10);
    FactorStore store = filled_store(rng, n, m, 0.1, m);
    auto z = gaussian_vec(rng, n);
    std::vector<double> mid(n), back(n);
    store.az(z, store.all_positions(), mid);
    store.ainvz(mid, store.all_positions(), back);
    CHECK(oracle::rel_err(back, z) <= 1e-9);
    store.ainvz(z, store.all_positions(), mid);
    store.az(mid, store.all_positions(), back);
    CHECK(oracle::rel_err(back, z) <= 1e-9);
  }
}

TEST_CASE("replace semantics") {
  RandomSource rng(5150);
  const int n = 10;

  SUBCASE("single stored vector: v = p after replacement") {
    FactorStore store(n, 3, 0.2);
    store.append(gaussian_vec(rng, n), 0);
    auto p = gaussian_vec(rng, n);
    store.replace_at(0, p, 7);
    REQUIRE(store.count() == 1);
    for (int i = 0; i < n; ++i) CHECK(store.v_at(0)[i] == p[i]);
    CHECK(store.stamp_at(0) == 7);
  }

  SUBCASE("replacing the oldest of two recomputes both, round trip holds") {
    FactorStore store(n, 2, 0.2);
    store.append(gaussian_vec(rng, n), 0);
    store.append(gaussian_vec(rng, n), 1);
    store.replace_at(0, gaussian_vec(rng, n), 2);
    auto z = gaussian_vec(rng, n);
    std::vector<double> mid(n), back(n);
    store.az(z, store.all_positions(), mid);
    store.ainvz(mid, store.all_positions(), back);
    CHECK(oracle::rel_err(back, z) <= 1e-9);
  }

  SUBCASE("replacing the newest leaves older rows bitwise unchanged") {
    FactorStore store(n, 2, 0.2);
    store.append(gaussian_vec(rng, n), 0);
    store.append(gaussian_vec(rng, n), 1);
    std::vector<double> old_v(store.v_at(0).begin(), store.v_at(0).end());
    std::vector<double> old_p(store.p_at(0).begin(), store.p_at(0).end());
    const double old_b = store.b_at(0), old_d = store.d_at(0);
    store.replace_at(1, gaussian_vec(rng, n), 2);
    CHECK(std::memcmp(old_v.data(), store.v_at(0).data(), n * sizeof(double)) == 0);
    CHECK(std::memcmp(old_p.data(), store.p_at(0).data(), n * sizeof(double)) == 0);
    CHECK(store.b_at(0) == old_b);
    CHECK(store.d_at(0) == old_d);
  }

  SUBCASE("replacement matches a dense factor built in the new temporal order") {
    FactorStore store(n, 3, 0.25);
    std::vector<std::vector<double>> ps;
    for (int i = 0; i < 3; ++i) {
      ps.push_back(gaussian_vec(rng, n));
      store.append(ps.back(), i);
    }
    auto p_new = gaussian_vec(rng, n);
    store.replace_at(1, p_new, 3);  // drop the middle pair

    oracle::DenseFactor dense(n, 0.25);
    dense.push(ps[0]);
    dense.push(ps[2]);
    dense.push(p_new);
    auto z = gaussian_vec(rng, n);
    std::vector<double> got(n);
    store.az(z, store.all_positions(), got);
    CHECK(oracle::rel_err(got, oracle::matvec(dense.a, z)) <= 1e-9);
  }
}

TEST_CASE("az validates its arguments") {
  FactorStore store(4, 2, 0.2);
  RandomSource rng(1);
  store.append(gaussian_vec(rng, 4), 0);
  std::vector<double> z = {1, 2, 3, 4};
  std::vector<double> out(4);
  const int bad_range[] = {1};
  CHECK_THROWS_AS(store.az(z, bad_range, out), std::invalid_argument);
  const int not_increasing[] = {0, 0};
  CHECK_THROWS_AS(store.az(z, not_increasing, out), std::invalid_argument);
  std::vector<double> short_z = {1, 2};
  CHECK_THROWS_AS(store.az(short_z, {}, out), std::invalid_argument);
}

TEST_CASE("az performs exactly |idx| inner products") {
  RandomSource rng(777);
  const int n = 16, m = 6;
  FactorStore store = filled_store(rng, n, m, 0.1, m);
  auto z = gaussian_vec(rng, n);
  std::vector<double> out(n);

  store.reset_az_dot_count();
  const int subset[] = {1, 3, 4};
  store.az(z, subset, out);
  CHECK(store.az_dot_count() == 3);

  store.reset_az_dot_count();
  store.az(z, store.all_positions(), out);
  CHECK(store.az_dot_count() == static_cast<std::uint64_t>(m));

  store.reset_az_dot_count();
  store.az(z, {}, out);
  CHECK(store.az_dot_count() == 0);
}

TEST_CASE("json round trip preserves the store bit for bit") {
  RandomSource rng(31004);
  FactorStore store = filled_store(rng, 9, 4, 0.3, 4);
  auto j = store.to_json();
  FactorStore copy = FactorStore::from_json(j);
  REQUIRE(copy.count() == store.count());
  for (int pos = 0; pos < store.count(); ++pos) {
    CHECK(std::memcmp(copy.v_at(pos).data(), store.v_at(pos).data(),
                      9 * sizeof(double)) == 0);
    CHECK(copy.b_at(pos) == store.b_at(pos));
    CHECK(copy.stamp_at(pos) == store.stamp_at(pos));
  }
  auto z = gaussian_vec(rng, 9);
  std::vector<double> a(9), b(9);
  store.az(z, store.all_positions(), a);
  copy.az(z, copy.all_positions(), b);
  CHECK(std::memcmp(a.data(), b.data(), 9 * sizeof(double)) == 0);
}
