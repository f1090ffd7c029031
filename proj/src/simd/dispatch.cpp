// SPDX-License-Identifier: Apache-2.0
#include <atomic>
#include <cstdlib>
#include <string>

#include "facells/error.hpp"
#include "facells/simd/kernels.hpp"

namespace facells::simd {
namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend initial_backend() {
  if (const char* env = std::getenv("FACELLS_SIMD")) {
    if (std::string(env) == "scalar") return Backend::scalar;
  }
  return backend_supported(Backend::avx2) ? Backend::avx2 : Backend::scalar;
}

std::atomic<const KernelTable*>& active_table() {
  static std::atomic<const KernelTable*> table{
      initial_backend() == Backend::avx2 ? avx2_kernels() : &scalar_kernels()};
  return table;
}

const KernelTable& k() { return *active_table().load(std::memory_order_relaxed); }

}  // namespace

std::string_view backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

bool backend_supported(Backend b) {
  if (b == Backend::scalar) return true;
  return avx2_kernels() != nullptr && cpu_has_avx2();
}

Backend active_backend() {
  return active_table().load() == &scalar_kernels() ? Backend::scalar : Backend::avx2;
}

void set_backend(Backend b) {
  if (!backend_supported(b)) {
    throw UsageError("SIMD backend '" + std::string(backend_name(b)) +
                     "' is not supported on this CPU");
  }
  active_table().store(b == Backend::avx2 ? avx2_kernels() : &scalar_kernels());
}

double dot(std::span<const double> a, std::span<const double> b) {
  return k().dot(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  k().axpy(alpha, x.data(), y.data(), x.size());
}

void gemv(std::span<const double> a, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<double> y) {
  k().gemv(a.data(), rows, cols, x.data(), y.data());
}

void gemv_t(std::span<const double> a, std::size_t rows, std::size_t cols,
            std::span<const double> v, std::span<double> y) {
  k().gemv_t(a.data(), rows, cols, v.data(), y.data());
}

void ger(std::span<double> a, std::size_t rows, std::size_t cols,
         std::span<const double> v, std::span<const double> x) {
  k().ger(a.data(), rows, cols, v.data(), x.data());
}

std::size_t nearest_live(double px, double py, std::span<const double> xs,
                         std::span<const double> ys,
                         std::span<const std::uint8_t> live) {
  return k().nearest_live(px, py, xs.data(), ys.data(), live.data(), xs.size());
}

}  // namespace facells::simd
