#if defined(__x86_64__) || defined(_M_X64)

#include "kernel_table.hpp"

#if defined(__AVX2__)

#include <immintrin.h>

namespace lmcma {
namespace kernels {
namespace detail {
namespace {

// One __m256d register holds the four accumulator lanes of the reference
// backend. Multiplies and adds stay unfused.

inline double reduce_lanes(__m256d acc, const double* x, const double* y, std::size_t i,
                           std::size_t n) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  for (std::size_t j = 0; i < n; ++i, ++j) lane[j] += x[i] * y[i];
  return (lane[0] + lane[2]) + (lane[1] + lane[3]);
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d xv = _mm256_loadu_pd(x + i);
    __m256d yv = _mm256_loadu_pd(y + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(xv, yv));
  }
  return reduce_lanes(acc, x, y, i, n);
}

double wssq_avx2(const double* w, const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d wv = _mm256_loadu_pd(w + i);
    __m256d xv = _mm256_loadu_pd(x + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_mul_pd(wv, xv), xv));
  }
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  for (std::size_t j = 0; i < n; ++i, ++j) lane[j] += (w[i] * x[i]) * x[i];
  return (lane[0] + lane[2]) + (lane[1] + lane[3]);
}

void scale_axpy_avx2(double* x, double a, double k, const double* p, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  const __m256d kv = _mm256_set1_pd(k);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d xv = _mm256_loadu_pd(x + i);
    __m256d pv = _mm256_loadu_pd(p + i);
    _mm256_storeu_pd(x + i, _mm256_add_pd(_mm256_mul_pd(av, xv), _mm256_mul_pd(kv, pv)));
  }
  for (; i < n; ++i) x[i] = a * x[i] + k * p[i];
}

void axpy_avx2(double* y, double a, const double* x, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d yv = _mm256_loadu_pd(y + i);
    __m256d xv = _mm256_loadu_pd(x + i);
    _mm256_storeu_pd(y + i, _mm256_add_pd(yv, _mm256_mul_pd(av, xv)));
  }
  for (; i < n; ++i) y[i] = y[i] + a * x[i];
}

void axpby_avx2(double* out, double a, const double* x, double b, const double* y,
                std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  const __m256d bv = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d xv = _mm256_loadu_pd(x + i);
    __m256d yv = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(out + i,
                     _mm256_add_pd(_mm256_mul_pd(av, xv), _mm256_mul_pd(bv, yv)));
  }
  for (; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

}  // namespace

bool avx2_available() { return __builtin_cpu_supports("avx2") != 0; }

const KernelTable& avx2_table() {
  static const KernelTable table = {dot_avx2, wssq_avx2, scale_axpy_avx2, axpy_avx2,
                                    axpby_avx2};
  return table;
}

}  // namespace detail
}  // namespace kernels
}  // namespace lmcma

#else  // compiler lacks AVX2 support for this translation unit

namespace lmcma {
namespace kernels {
namespace detail {

bool avx2_available() { return false; }
const KernelTable& avx2_table() { return scalar_table(); }

}  // namespace detail
}  // namespace kernels
}  // namespace lmcma

#endif
#endif
