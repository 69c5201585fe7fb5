#ifndef LMCMA_KERNELS_HPP
#define LMCMA_KERNELS_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace lmcma {
namespace kernels {

// Vector arithmetic used by every inner loop of the library. A scalar
// reference implementation and SIMD variants (AVX2 on x86-64, NEON on
// aarch64) are selected at runtime; all backends evaluate the same fixed
// 4-lane blocked operation order and therefore return bit-identical
// results. Backend choice never changes an optimizer trajectory.

enum class Backend { scalar, avx2, neon };

Backend active_backend();
bool set_backend(Backend b);  // false if b is unavailable on this CPU
std::vector<Backend> available_backends();
const char* backend_name(Backend b);
Backend backend_from_name(const std::string& name);

/// Inner product, 4-lane blocked accumulation.
double dot(std::span<const double> x, std::span<const double> y);

/// sum_i w[i] * x[i]^2, 4-lane blocked accumulation.
double weighted_sum_sq(std::span<const double> w, std::span<const double> x);

/// x <- a*x + k*p
void scale_axpy(std::span<double> x, double a, double k, std::span<const double> p);

/// y <- y + a*x
void axpy(std::span<double> y, double a, std::span<const double> x);

/// out <- a*x + b*y
void axpby(std::span<double> out, double a, std::span<const double> x, double b,
           std::span<const double> y);

/// out <- A * x for row-major A (rows x cols).
void matvec(std::span<double> out, std::span<const double> a, std::size_t rows,
            std::size_t cols, std::span<const double> x);

/// out <- A^T * x for row-major A (rows x cols).
void matvec_t(std::span<double> out, std::span<const double> a, std::size_t rows,
              std::size_t cols, std::span<const double> x);

}  // namespace kernels
}  // namespace lmcma

#endif
