// SPDX-License-Identifier: Apache-2.0
#pragma once

// Dense double-precision inner loops shared by the LSTM engine and the
// stroke-ordering heuristic. Every kernel has a scalar reference version and
// an AVX2 version; the active backend is chosen once at startup from CPUID
// (override with FACELLS_SIMD=scalar|avx2 or set_backend()).
//
// Matrices are row-major, `rows x cols`, densely packed.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace facells::simd {

enum class Backend { scalar, avx2 };

std::string_view backend_name(Backend b);
bool backend_supported(Backend b);
Backend active_backend();
/// Throws UsageError when the CPU lacks the requested instruction set.
void set_backend(Backend b);

double dot(std::span<const double> a, std::span<const double> b);
/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
/// y += A x
void gemv(std::span<const double> a, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<double> y);
/// y += A^T v
void gemv_t(std::span<const double> a, std::size_t rows, std::size_t cols,
            std::span<const double> v, std::span<double> y);
/// A += v x^T
void ger(std::span<double> a, std::size_t rows, std::size_t cols,
         std::span<const double> v, std::span<const double> x);
/// Index of the live point nearest to (px, py); ties go to the lowest index.
/// Returns xs.size() when no point is live.
std::size_t nearest_live(double px, double py, std::span<const double> xs,
                         std::span<const double> ys,
                         std::span<const std::uint8_t> live);

/// Per-backend entry points, exposed so equivalence tests can call both sides
/// regardless of which one is active.
struct KernelTable {
  double (*dot)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*gemv)(const double*, std::size_t, std::size_t, const double*, double*);
  void (*gemv_t)(const double*, std::size_t, std::size_t, const double*, double*);
  void (*ger)(double*, std::size_t, std::size_t, const double*, const double*);
  std::size_t (*nearest_live)(double, double, const double*, const double*,
                              const std::uint8_t*, std::size_t);
};

const KernelTable& scalar_kernels();
/// nullptr when the binary was built without x86 support.
const KernelTable* avx2_kernels();

}  // namespace facells::simd
