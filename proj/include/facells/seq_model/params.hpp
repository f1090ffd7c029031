// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "facells/seq_model/config.hpp"

namespace facells::seq_model {

/// A named, row-major slice of the flat parameter vector.
struct ParamBlock {
  std::string name;
  std::size_t offset = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::size_t size() const { return rows * cols; }
};

/// One LSTM direction. Gates are stacked in the order input, forget,
/// cell candidate, output: W is 4H x in, U is 4H x H, b is 4H.
struct LstmSlots {
  std::size_t w = 0, u = 0, b = 0;
  std::size_t in = 0, cells = 0;
};

struct DenseSlots {
  std::size_t w = 0, b = 0;
  std::size_t in = 0, out = 0;
  Activation activation = Activation::none;
};

/// Offsets of every tensor for a given config. Gradients share the layout.
class ParamLayout {
 public:
  ParamLayout() = default;
  explicit ParamLayout(const ModelConfig& cfg);

  std::size_t size() const { return size_; }
  const std::vector<ParamBlock>& blocks() const { return blocks_; }
  /// lstm(layer)[0] is the forward direction, [1] the backward one (only
  /// meaningful for bidirectional layers).
  const std::array<LstmSlots, 2>& lstm(std::size_t layer) const { return lstm_[layer]; }
  std::size_t lstm_layers() const { return lstm_.size(); }
  const std::vector<DenseSlots>& dense() const { return dense_; }
  const DenseSlots& output() const { return output_; }

 private:
  std::size_t add(const std::string& name, std::size_t rows, std::size_t cols);

  std::vector<ParamBlock> blocks_;
  std::vector<std::array<LstmSlots, 2>> lstm_;
  std::vector<DenseSlots> dense_;
  DenseSlots output_;
  std::size_t size_ = 0;
};

struct ModelParams {
  ModelConfig config;
  ParamLayout layout;
  std::vector<double> values;

  /// Zero-filled parameters for cfg.
  static ModelParams zeros(const ModelConfig& cfg);
  /// Weights uniform in +-1/sqrt(fan_in) per matrix, biases zero except the
  /// forget-gate bias, which starts at +1.
  static ModelParams init(const ModelConfig& cfg, std::uint64_t seed);

  std::span<const double> block(std::size_t offset, std::size_t n) const {
    return {values.data() + offset, n};
  }
  /// Throws NumericError naming the first block that holds a NaN or Inf.
  void check_finite() const;
};

}  // namespace facells::seq_model
