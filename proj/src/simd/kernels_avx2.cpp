// SPDX-License-Identifier: Apache-2.0
#include "facells/simd/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include <limits>

#define FACELLS_AVX2 __attribute__((target("avx2,fma")))

namespace facells::simd {
namespace {

FACELLS_AVX2 inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

FACELLS_AVX2 double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  if (i + 4 <= n) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    i += 4;
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

FACELLS_AVX2 void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

FACELLS_AVX2 void gemv_avx2(const double* a, std::size_t rows, std::size_t cols,
                            const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] += dot_avx2(a + r * cols, x, cols);
}

FACELLS_AVX2 void gemv_t_avx2(const double* a, std::size_t rows, std::size_t cols,
                              const double* v, double* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    if (v[r] != 0.0) axpy_avx2(v[r], a + r * cols, y, cols);
  }
}

FACELLS_AVX2 void ger_avx2(double* a, std::size_t rows, std::size_t cols, const double* v,
                           const double* x) {
  for (std::size_t r = 0; r < rows; ++r) {
    if (v[r] != 0.0) axpy_avx2(v[r], x, a + r * cols, cols);
  }
}

// No FMA here: distances must round exactly like the scalar kernel so both
// backends pick the same endpoint.
__attribute__((target("avx2"))) std::size_t nearest_live_avx2(
    double px, double py, const double* xs, const double* ys, const std::uint8_t* live,
    std::size_t n) {
  const double inf = std::numeric_limits<double>::infinity();
  const __m256d vpx = _mm256_set1_pd(px);
  const __m256d vpy = _mm256_set1_pd(py);
  const __m256d vinf = _mm256_set1_pd(inf);
  __m256d best_d = vinf;
  __m256d best_i = _mm256_set1_pd(-1.0);
  __m256d idx = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
  const __m256d four = _mm256_set1_pd(4.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs + i), vpx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys + i), vpy);
    __m256d d = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    const __m256d alive = _mm256_castsi256_pd(_mm256_cmpgt_epi64(
        _mm256_setr_epi64x(live[i], live[i + 1], live[i + 2], live[i + 3]),
        _mm256_setzero_si256()));
    d = _mm256_blendv_pd(vinf, d, alive);
    const __m256d better = _mm256_cmp_pd(d, best_d, _CMP_LT_OQ);
    best_d = _mm256_blendv_pd(best_d, d, better);
    best_i = _mm256_blendv_pd(best_i, idx, better);
    idx = _mm256_add_pd(idx, four);
  }
  alignas(32) double lane_d[4];
  alignas(32) double lane_i[4];
  _mm256_store_pd(lane_d, best_d);
  _mm256_store_pd(lane_i, best_i);
  std::size_t best = n;
  double bd = inf;
  for (int l = 0; l < 4; ++l) {
    if (lane_i[l] < 0.0) continue;
    const auto li = static_cast<std::size_t>(lane_i[l]);
    if (lane_d[l] < bd || (lane_d[l] == bd && li < best)) {
      bd = lane_d[l];
      best = li;
    }
  }
  for (; i < n; ++i) {
    if (!live[i]) continue;
    const double dx = xs[i] - px;
    const double dy = ys[i] - py;
    const double d = dx * dx + dy * dy;
    if (d < bd) {
      bd = d;
      best = i;
    }
  }
  return best;
}

}  // namespace

const KernelTable* avx2_kernels() {
  static const KernelTable table{dot_avx2,    axpy_avx2, gemv_avx2,
                                 gemv_t_avx2, ger_avx2,  nearest_live_avx2};
  return &table;
}

}  // namespace facells::simd

#else

namespace facells::simd {
const KernelTable* avx2_kernels() { return nullptr; }
}  // namespace facells::simd

#endif
