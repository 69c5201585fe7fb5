#include "kernel_table.hpp"

// Reference backend. The 4-lane blocking mirrors one AVX2 register (or a
// NEON register pair) so that SIMD variants reproduce these results
// exactly.

namespace lmcma {
namespace kernels {
namespace detail {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc[0] += x[i] * y[i];
    acc[1] += x[i + 1] * y[i + 1];
    acc[2] += x[i + 2] * y[i + 2];
    acc[3] += x[i + 3] * y[i + 3];
  }
  for (std::size_t j = 0; i < n; ++i, ++j) acc[j] += x[i] * y[i];
  return (acc[0] + acc[2]) + (acc[1] + acc[3]);
}

double wssq_scalar(const double* w, const double* x, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc[0] += (w[i] * x[i]) * x[i];
    acc[1] += (w[i + 1] * x[i + 1]) * x[i + 1];
    acc[2] += (w[i + 2] * x[i + 2]) * x[i + 2];
    acc[3] += (w[i + 3] * x[i + 3]) * x[i + 3];
  }
  for (std::size_t j = 0; i < n; ++i, ++j) acc[j] += (w[i] * x[i]) * x[i];
  return (acc[0] + acc[2]) + (acc[1] + acc[3]);
}

void scale_axpy_scalar(double* x, double a, double k, const double* p, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] = a * x[i] + k * p[i];
}

void axpy_scalar(double* y, double a, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + a * x[i];
}

void axpby_scalar(double* out, double a, const double* x, double b, const double* y,
                  std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table = {dot_scalar, wssq_scalar, scale_axpy_scalar,
                                    axpy_scalar, axpby_scalar};
  return table;
}

}  // namespace detail
}  // namespace kernels
}  // namespace lmcma
