#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "lmcma/eigenspectrum.hpp"
#include "lmcma/linalg.hpp"
#include "lmcma/rng.hpp"
#include "oracle.hpp"

using namespace lmcma;

TEST_CASE("empty store has a flat unit spectrum") {
  FactorStore store(12, 4, 0.2);
  auto eig = factor_eigenspectrum(store);
  REQUIRE(eig.size() == 12);
  for (double e : eig) CHECK(e == 1.0);
}

TEST_CASE("jacobi eigenvalues of a known matrix") {
  // [[2, 1], [1, 2]] has eigenvalues 3 and 1.
  std::vector<double> a = {2, 1, 1, 2};
  auto eig = linalg::jacobi_eigenvalues(a, 2);
  CHECK(eig[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(eig[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("low-rank spectrum matches the dense eigensolve") {
  RandomSource rng(404);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 16;
    const int m = 1 + static_cast<int>(rng.next_u64() % 5);
    const double c1 = 0.05 + 0.4 * rng.uniform01();

    oracle::DenseFactor dense(n, c1);
    FactorStore store(n, m, c1);
    for (int i = 0; i < m; ++i) {
      std::vector<double> p(n);
      for (double& v : p) v = rng.gaussian();
      store.append(p, i);
      dense.push(p);
    }

    // dense C = A A^T
    std::vector<double> c(n * n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += dense.a[i * n + k] * dense.a[j * n + k];
        c[i * n + j] = s;
      }
    auto want = linalg::jacobi_eigenvalues(c, n);
    auto got = factor_eigenspectrum(store);
    REQUIRE(got.size() == want.size());
    for (int i = 0; i < n; ++i)
      CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-8));
  }
}

TEST_CASE("spectrum carries at most 2m non-baseline values") {
  RandomSource rng(42);
  const int n = 64, m = 4;
  FactorStore store(n, m, 0.1);
  for (int i = 0; i < m; ++i) {
    std::vector<double> p(n);
    for (double& v : p) v = rng.gaussian();
    store.append(p, i);
  }
  auto eig = factor_eigenspectrum(store);
  const double base = std::pow(store.scale_a(), 2.0 * m);
  int off_base = 0;
  for (double e : eig) {
    REQUIRE(e > 0.0);
    if (std::fabs(e - base) > 1e-9 * base) ++off_base;
  }
  CHECK(off_base <= 2 * m);
}
