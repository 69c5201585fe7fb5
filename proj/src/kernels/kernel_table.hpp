#ifndef LMCMA_KERNEL_TABLE_HPP
#define LMCMA_KERNEL_TABLE_HPP

#include <cstddef>

namespace lmcma {
namespace kernels {
namespace detail {

// Raw entry points implemented per backend. Contract: identical results,
// bit for bit, across backends. All reductions use four accumulator lanes,
// lane j collects elements with index congruent to j mod 4, and the final
// reduction is (acc0 + acc2) + (acc1 + acc3). No fused multiply-add.
struct KernelTable {
  double (*dot)(const double*, const double*, std::size_t);
  double (*weighted_sum_sq)(const double*, const double*, std::size_t);
  void (*scale_axpy)(double*, double, double, const double*, std::size_t);
  void (*axpy)(double*, double, const double*, std::size_t);
  void (*axpby)(double*, double, const double*, double, const double*, std::size_t);
};

const KernelTable& scalar_table();

#if defined(__x86_64__) || defined(_M_X64)
bool avx2_available();
const KernelTable& avx2_table();
#endif

#if defined(__aarch64__)
const KernelTable& neon_table();
#endif

}  // namespace detail
}  // namespace kernels
}  // namespace lmcma

#endif
