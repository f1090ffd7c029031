// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "facells/seq_model/lstm.hpp"
#include "facells/seq_model/params.hpp"
#include "facells/sketch/encoding.hpp"

namespace facells::seq_model {

/// Padded batch of (a, b, p) sequences. Only the first lengths[i] steps of
/// row i are read; padding never influences any result.
struct SequenceBatch {
  std::size_t max_len = 0;
  std::size_t input_dim = 3;
  std::size_t outputs = 1;
  std::vector<double> inputs;         ///< size() x max_len x input_dim
  std::vector<std::size_t> lengths;   ///< valid prefix per row
  std::vector<double> targets;        ///< size() x outputs, values in {0, 1}; may be empty

  std::size_t size() const { return lengths.size(); }
  /// The valid prefix of row i, lengths[i] x input_dim.
  std::span<const double> row(std::size_t i) const {
    return {inputs.data() + i * max_len * input_dim, lengths[i] * input_dim};
  }
  std::span<const double> target_row(std::size_t i) const {
    return {targets.data() + i * outputs, outputs};
  }

  /// Packs encoded sequences; the pen state becomes the third channel.
  /// `targets` is row-major size x outputs (or empty). `pad_to` extends
  /// max_len beyond the longest sequence.
  static SequenceBatch pack(std::span<const sketch::EncodedSequence> seqs,
                            std::vector<double> targets, std::size_t outputs,
                            std::size_t pad_to = 0);
  /// Throws DataError on inconsistent sizes or zero-length rows.
  void validate() const;
};

/// Everything the backward pass needs for one sequence.
struct SequenceForward {
  std::size_t steps = 0;
  std::vector<std::vector<double>> layer_outputs;     ///< per layer, steps x width
  std::vector<std::array<DirectionTrace, 2>> traces;  ///< per layer, [fwd, bwd]
  std::vector<double> pooled;                         ///< head output
  std::vector<std::vector<double>> dense_pre;         ///< per hidden dense layer
  std::vector<std::vector<double>> dense_out;
  std::vector<double> logits;
  std::vector<double> probs;
};

CellWeights cell_weights(const ModelParams& p, std::size_t layer, int direction);

/// Forward pass over one sequence of `steps` rows (steps x input_dim).
/// Throws DataError for an empty sequence.
SequenceForward forward_sequence(const ModelParams& p, std::span<const double> x,
                                 std::size_t steps);

/// Accumulates d(loss)/d(params) into `grad` given d(loss)/d(logits).
void backward_sequence(const ModelParams& p, std::span<const double> x, const SequenceForward& fw,
                       std::span<const double> dlogits, std::span<double> grad);

struct BatchOutput {
  std::vector<double> logits;  ///< size x outputs
  std::vector<double> probs;   ///< size x outputs
  /// Per sequence, per LSTM layer, steps x width. Filled on request.
  std::vector<std::vector<std::vector<double>>> hidden;
};

BatchOutput forward(const ModelParams& p, const SequenceBatch& batch, bool keep_hidden = false);

struct LossAndGradient {
  double loss = 0.0;
  std::vector<double> grad;
  std::vector<double> probs;
};

/// Mean BCE over batch x outputs and its exact gradient. Sequences are
/// processed in parallel; the reduction order is fixed, so the result does
/// not depend on the worker count.
LossAndGradient loss_and_gradient(const ModelParams& p, const SequenceBatch& batch);

/// Gradient only.
std::vector<double> backward(const ModelParams& p, const SequenceBatch& batch);

/// Mean BCE without gradients.
double batch_loss(const ModelParams& p, const SequenceBatch& batch);

}  // namespace facells::seq_model
