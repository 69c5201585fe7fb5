#if defined(__aarch64__)

#include <arm_neon.h>

#include "kernel_table.hpp"

namespace lmcma {
namespace kernels {
namespace detail {
namespace {

// Two float64x2_t registers stand in for the four accumulator lanes:
// acc01 holds lanes 0,1 and acc23 holds lanes 2,3.

double dot_neon(const double* x, const double* y, std::size_t n) {
  float64x2_t acc01 = vdupq_n_f64(0.0);
  float64x2_t acc23 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc01 = vaddq_f64(acc01, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
    acc23 = vaddq_f64(acc23, vmulq_f64(vld1q_f64(x + i + 2), vld1q_f64(y + i + 2)));
  }
  double lane[4] = {vgetq_lane_f64(acc01, 0), vgetq_lane_f64(acc01, 1),
                    vgetq_lane_f64(acc23, 0), vgetq_lane_f64(acc23, 1)};
  for (std::size_t j = 0; i < n; ++i, ++j) lane[j] += x[i] * y[i];
  return (lane[0] + lane[2]) + (lane[1] + lane[3]);
}

double wssq_neon(const double* w, const double* x, std::size_t n) {
  float64x2_t acc01 = vdupq_n_f64(0.0);
  float64x2_t acc23 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    float64x2_t x01 = vld1q_f64(x + i);
    float64x2_t x23 = vld1q_f64(x + i + 2);
    acc01 = vaddq_f64(acc01, vmulq_f64(vmulq_f64(vld1q_f64(w + i), x01), x01));
    acc23 = vaddq_f64(acc23, vmulq_f64(vmulq_f64(vld1q_f64(w + i + 2), x23), x23));
  }
  double lane[4] = {vgetq_lane_f64(acc01, 0), vgetq_lane_f64(acc01, 1),
                    vgetq_lane_f64(acc23, 0), vgetq_lane_f64(acc23, 1)};
  for (std::size_t j = 0; i < n; ++i, ++j) lane[j] += (w[i] * x[i]) * x[i];
  return (lane[0] + lane[2]) + (lane[1] + lane[3]);
}

void scale_axpy_neon(double* x, double a, double k, const double* p, std::size_t n) {
  const float64x2_t av = vdupq_n_f64(a);
  const float64x2_t kv = vdupq_n_f64(k);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t xv = vld1q_f64(x + i);
    float64x2_t pv = vld1q_f64(p + i);
    vst1q_f64(x + i, vaddq_f64(vmulq_f64(av, xv), vmulq_f64(kv, pv)));
  }
  for (; i < n; ++i) x[i] = a * x[i] + k * p[i];
}

void axpy_neon(double* y, double a, const double* x, std::size_t n) {
  const float64x2_t av = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t yv = vld1q_f64(y + i);
    float64x2_t xv = vld1q_f64(x + i);
    vst1q_f64(y + i, vaddq_f64(yv, vmulq_f64(av, xv)));
  }
  for (; i < n; ++i) y[i] = y[i] + a * x[i];
}

void axpby_neon(double* out, double a, const double* x, double b, const double* y,
                std::size_t n) {
  const float64x2_t av = vdupq_n_f64(a);
  const float64x2_t bv = vdupq_n_f64(b);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t xv = vld1q_f64(x + i);
    float64x2_t yv = vld1q_f64(y + i);
    vst1q_f64(out + i, vaddq_f64(vmulq_f64(av, xv), vmulq_f64(bv, yv)));
  }
  for (; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

}  // namespace

const KernelTable& neon_table() {
  static const KernelTable table = {dot_neon, wssq_neon, scale_axpy_neon, axpy_neon,
                                    axpby_neon};
  return table;
}

}  // namespace detail
}  // namespace kernels
}  // namespace lmcma

#endif
