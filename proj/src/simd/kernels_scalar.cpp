// SPDX-License-Identifier: Apache-2.0
#include <limits>

#include "facells/simd/kernels.hpp"

namespace facells::simd {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void gemv_scalar(const double* a, std::size_t rows, std::size_t cols,
                 const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] += dot_scalar(a + r * cols, x, cols);
}

void gemv_t_scalar(const double* a, std::size_t rows, std::size_t cols,
                   const double* v, double* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    if (v[r] != 0.0) axpy_scalar(v[r], a + r * cols, y, cols);
  }
}

void ger_scalar(double* a, std::size_t rows, std::size_t cols, const double* v,
                const double* x) {
  for (std::size_t r = 0; r < rows; ++r) {
    if (v[r] != 0.0) axpy_scalar(v[r], x, a + r * cols, cols);
  }
}

std::size_t nearest_live_scalar(double px, double py, const double* xs,
                                const double* ys, const std::uint8_t* live,
                                std::size_t n) {
  std::size_t best = n;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (!live[i]) continue;
    const double dx = xs[i] - px;
    const double dy = ys[i] - py;
    const double d = dx * dx + dy * dy;
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{dot_scalar,    axpy_scalar, gemv_scalar,
                                 gemv_t_scalar, ger_scalar,  nearest_live_scalar};
  return table;
}

}  // namespace facells::simd
