// SPDX-License-Identifier: Apache-2.0
#pragma once

// Single LSTM direction:
//   i = sig(Wi x + Ui h' + bi)    f = sig(Wf x + Uf h' + bf)
//   g = tanh(Wg x + Ug h' + bg)   o = sig(Wo x + Uo h' + bo)
//   c = f * c' + i * g            h = o * tanh(c)
// with zero initial state.

#include <cstddef>
#include <span>
#include <vector>

namespace facells::seq_model {

/// Read-only view of one direction's weights.
struct CellWeights {
  std::span<const double> w;  ///< 4H x in
  std::span<const double> u;  ///< 4H x H
  std::span<const double> b;  ///< 4H
  std::size_t in = 0;
  std::size_t cells = 0;
};

/// Gradient accumulators matching CellWeights.
struct CellGrads {
  std::span<double> w;
  std::span<double> u;
  std::span<double> b;
};

struct CellState {
  std::vector<double> h;
  std::vector<double> c;
};

/// One step from (h_prev, c_prev).
CellState lstm_cell_step(const CellWeights& p, std::span<const double> x,
                         std::span<const double> h_prev, std::span<const double> c_prev);

/// Activations of one direction over a sequence, indexed by time step
/// (not by processing order).
struct DirectionTrace {
  std::size_t steps = 0;
  std::size_t cells = 0;
  bool reverse = false;
  std::vector<double> gates;  ///< steps x 4H, post-activation i,f,g,o
  std::vector<double> c;      ///< steps x H
  std::vector<double> tanh_c; ///< steps x H
  std::vector<double> h;      ///< steps x H

  std::span<const double> h_at(std::size_t t) const { return {h.data() + t * cells, cells}; }
};

/// Runs the direction over `steps` rows of `x` (steps x in, row-major);
/// `reverse` processes the last step first.
DirectionTrace run_direction(const CellWeights& p, std::span<const double> x, std::size_t steps,
                             bool reverse);

/// Backpropagation through time. `dh` (steps x H) is the loss gradient
/// arriving at each step's h from above. Accumulates into `g`; when `dx` is
/// non-empty (steps x in) the input gradient is accumulated there too.
void backprop_direction(const CellWeights& p, const DirectionTrace& tr, std::span<const double> x,
                        std::span<const double> dh, CellGrads g, std::span<double> dx);

}  // namespace facells::seq_model
