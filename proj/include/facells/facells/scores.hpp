// SPDX-License-Identifier: Apache-2.0
#pragma once

// Per-point attribute scores. For a globally averaged head whose dense
// layers are all affine, the layers after the average can be applied to
// every time step instead: s_t = A h_t + c. Because the map is affine,
// mean_t(s_t) equals the model's logit. Scores are pre-sigmoid.

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"
#include "facells/seq_model/params.hpp"
#include "facells/sketch/encoding.hpp"

namespace facells::scoring {

struct PointScores {
  std::string id;
  std::size_t steps = 0;
  std::size_t outputs = 0;
  std::vector<double> logits;  ///< outputs, from the pooled path
  std::vector<double> points;  ///< steps x outputs

  double at(std::size_t t, std::size_t k) const { return points[t * outputs + k]; }
  /// Column k as a time series.
  std::vector<double> column(std::size_t k) const;
};

/// Throws UsageError for an fs head or any ReLU dense layer (the per-point
/// map would not be affine), DataError for an empty sequence.
PointScores per_point_scores(const seq_model::ModelParams& model,
                             const sketch::EncodedSequence& seq, const std::string& id = {});

struct CellTrace {
  std::vector<double> forward;
  std::vector<double> backward;  ///< empty for a unidirectional layer
};

/// Hidden value of one cell of one LSTM layer at every time step. Throws
/// UsageError when layer or cell is out of range.
CellTrace cell_trace(const seq_model::ModelParams& model, const sketch::EncodedSequence& seq,
                     std::size_t layer, std::size_t cell);

/// {"id", "logit", "points": [...]} for output column k.
nlohmann::json to_json(const PointScores& s, std::size_t k);

}  // namespace facells::scoring
