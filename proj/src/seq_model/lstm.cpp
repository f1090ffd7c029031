// SPDX-License-Identifier: Apache-2.0
#include "facells/seq_model/lstm.hpp"

#include <cmath>

#include "facells/simd/kernels.hpp"

namespace facells::seq_model {
namespace {

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// z holds the 4H pre-activations on entry and the gate values on exit.
void activate_gates(std::span<double> z, std::size_t cells) {
  for (std::size_t j = 0; j < cells; ++j) {
    z[j] = sigmoid(z[j]);
    z[cells + j] = sigmoid(z[cells + j]);
    z[2 * cells + j] = std::tanh(z[2 * cells + j]);
    z[3 * cells + j] = sigmoid(z[3 * cells + j]);
  }
}

}  // namespace

CellState lstm_cell_step(const CellWeights& p, std::span<const double> x,
                         std::span<const double> h_prev, std::span<const double> c_prev) {
  const std::size_t H = p.cells;
  std::vector<double> z(p.b.begin(), p.b.end());
  simd::gemv(p.w, 4 * H, p.in, x, z);
  simd::gemv(p.u, 4 * H, H, h_prev, z);
  activate_gates(z, H);
  CellState s{std::vector<double>(H), std::vector<double>(H)};
  for (std::size_t j = 0; j < H; ++j) {
    s.c[j] = z[H + j] * c_prev[j] + z[j] * z[2 * H + j];
    s.h[j] = z[3 * H + j] * std::tanh(s.c[j]);
  }
  return s;
}

DirectionTrace run_direction(const CellWeights& p, std::span<const double> x, std::size_t steps,
                             bool reverse) {
  const std::size_t H = p.cells;
  DirectionTrace tr;
  tr.steps = steps;
  tr.cells = H;
  tr.reverse = reverse;
  tr.gates.resize(steps * 4 * H);
  tr.c.resize(steps * H);
  tr.tanh_c.resize(steps * H);
  tr.h.resize(steps * H);
  for (std::size_t k = 0; k < steps; ++k) {
    const std::size_t t = reverse ? steps - 1 - k : k;
    std::span<double> z(tr.gates.data() + t * 4 * H, 4 * H);
    std::copy(p.b.begin(), p.b.end(), z.begin());
    simd::gemv(p.w, 4 * H, p.in, x.subspan(t * p.in, p.in), z);
    const double* c_prev = nullptr;
    if (k > 0) {
      const std::size_t tp = reverse ? t + 1 : t - 1;
      simd::gemv(p.u, 4 * H, H, tr.h_at(tp), z);
      c_prev = tr.c.data() + tp * H;
    }
    activate_gates(z, H);
    double* c = tr.c.data() + t * H;
    double* tc = tr.tanh_c.data() + t * H;
    double* h = tr.h.data() + t * H;
    for (std::size_t j = 0; j < H; ++j) {
      c[j] = z[j] * z[2 * H + j] + (c_prev ? z[H + j] * c_prev[j] : 0.0);
      tc[j] = std::tanh(c[j]);
      h[j] = z[3 * H + j] * tc[j];
    }
  }
  return tr;
}

void backprop_direction(const CellWeights& p, const DirectionTrace& tr, std::span<const double> x,
                        std::span<const double> dh, CellGrads g, std::span<double> dx) {
  const std::size_t H = p.cells;
  const std::size_t steps = tr.steps;
  std::vector<double> dh_rec(H, 0.0), dc_rec(H, 0.0), dz(4 * H);
  for (std::size_t k = steps; k-- > 0;) {
    const std::size_t t = tr.reverse ? steps - 1 - k : k;
    const bool has_prev = k > 0;
    const std::size_t tp = tr.reverse ? t + 1 : t - 1;
    const double* gate = tr.gates.data() + t * 4 * H;
    const double* tc = tr.tanh_c.data() + t * H;
    const double* c_prev = has_prev ? tr.c.data() + tp * H : nullptr;
    for (std::size_t j = 0; j < H; ++j) {
      const double i = gate[j], f = gate[H + j], gg = gate[2 * H + j], o = gate[3 * H + j];
      const double dhj = dh[t * H + j] + dh_rec[j];
      const double dc = dc_rec[j] + dhj * o * (1.0 - tc[j] * tc[j]);
      dz[j] = dc * gg * i * (1.0 - i);
      dz[H + j] = has_prev ? dc * c_prev[j] * f * (1.0 - f) : 0.0;
      dz[2 * H + j] = dc * i * (1.0 - gg * gg);
      dz[3 * H + j] = dhj * tc[j] * o * (1.0 - o);
      dc_rec[j] = dc * f;
    }
    simd::ger(g.w, 4 * H, p.in, dz, x.subspan(t * p.in, p.in));
    simd::axpy(1.0, dz, g.b);
    if (!dx.empty()) simd::gemv_t(p.w, 4 * H, p.in, dz, dx.subspan(t * p.in, p.in));
    std::fill(dh_rec.begin(), dh_rec.end(), 0.0);
    if (has_prev) {
      simd::ger(g.u, 4 * H, H, dz, tr.h_at(tp));
      simd::gemv_t(p.u, 4 * H, H, dz, dh_rec);
    }
  }
}

}  // namespace facells::seq_model
