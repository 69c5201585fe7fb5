#include "lmcma/kernels.hpp"

#include <atomic>
#include <cassert>
#include <cstdlib>
#include <stdexcept>

#include "kernel_table.hpp"

namespace lmcma {
namespace kernels {

namespace {

using detail::KernelTable;

const KernelTable* table_for(Backend b) {
  switch (b) {
    case Backend::scalar:
      return &detail::scalar_table();
#if defined(__x86_64__) || defined(_M_X64)
    case Backend::avx2:
      return detail::avx2_available() ? &detail::avx2_table() : nullptr;
    case Backend::neon:
      return nullptr;
#elif defined(__aarch64__)
    case Backend::neon:
      return &detail::neon_table();
    case Backend::avx2:
      return nullptr;
#else
    default:
      return nullptr;
#endif
  }
  return nullptr;
}

Backend detect_backend() {
  if (const char* env = std::getenv("LMCMA_KERNELS")) {
    Backend forced = backend_from_name(env);
    if (table_for(forced) != nullptr) return forced;
  }
#if defined(__x86_64__) || defined(_M_X64)
  if (detail::avx2_available()) return Backend::avx2;
#elif defined(__aarch64__)
  return Backend::neon;
#endif
  return Backend::scalar;
}

struct Dispatch {
  Backend backend;
  const KernelTable* table;
  Dispatch() : backend(detect_backend()), table(table_for(backend)) {}
};

Dispatch& dispatch() {
  static Dispatch d;
  return d;
}

}  // namespace

Backend active_backend() { return dispatch().backend; }

bool set_backend(Backend b) {
  const KernelTable* t = table_for(b);
  if (t == nullptr) return false;
  dispatch().backend = b;
  dispatch().table = t;
  return true;
}

std::vector<Backend> available_backends() {
  std::vector<Backend> out;
  for (Backend b : {Backend::scalar, Backend::avx2, Backend::neon})
    if (table_for(b) != nullptr) out.push_back(b);
  return out;
}

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::scalar:
      return "scalar";
    case Backend::avx2:
      return "avx2";
    case Backend::neon:
      return "neon";
  }
  return "unknown";
}

Backend backend_from_name(const std::string& name) {
  if (name == "scalar") return Backend::scalar;
  if (name == "avx2") return Backend::avx2;
  if (name == "neon") return Backend::neon;
  throw std::invalid_argument("unknown kernel backend: " + name);
}

double dot(std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size());
  return dispatch().table->dot(x.data(), y.data(), x.size());
}

double weighted_sum_sq(std::span<const double> w, std::span<const double> x) {
  assert(w.size() == x.size());
  return dispatch().table->weighted_sum_sq(w.data(), x.data(), x.size());
}

void scale_axpy(std::span<double> x, double a, double k, std::span<const double> p) {
  assert(x.size() == p.size());
  dispatch().table->scale_axpy(x.data(), a, k, p.data(), x.size());
}

void axpy(std::span<double> y, double a, std::span<const double> x) {
  assert(y.size() == x.size());
  dispatch().table->axpy(y.data(), a, x.data(), y.size());
}

void axpby(std::span<double> out, double a, std::span<const double> x, double b,
           std::span<const double> y) {
  assert(out.size() == x.size() && out.size() == y.size());
  dispatch().table->axpby(out.data(), a, x.data(), b, y.data(), out.size());
}

void matvec(std::span<double> out, std::span<const double> a, std::size_t rows,
            std::size_t cols, std::span<const double> x) {
  assert(a.size() == rows * cols && out.size() == rows && x.size() == cols);
  for (std::size_t r = 0; r < rows; ++r)
    out[r] = dot(a.subspan(r * cols, cols), x);
}

void matvec_t(std::span<double> out, std::span<const double> a, std::size_t rows,
              std::size_t cols, std::span<const double> x) {
  assert(a.size() == rows * cols && out.size() == cols && x.size() == rows);
  for (double& v : out) v = 0.0;
  for (std::size_t r = 0; r < rows; ++r)
    axpy(out, x[r], a.subspan(r * cols, cols));
}

}  // namespace kernels
}  // namespace lmcma
