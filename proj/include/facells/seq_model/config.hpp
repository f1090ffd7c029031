// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace facells::seq_model {

enum class Head {
  fs,  ///< final state: forward h at the last step || backward h at the first
  ga,  ///< global average of the last layer's per-step outputs
};

enum class Activation { relu, none };

struct LstmLayerSpec {
  std::size_t cells = 0;
  bool bidirectional = true;

  friend bool operator==(const LstmLayerSpec&, const LstmLayerSpec&) = default;
};

struct DenseSpec {
  std::size_t units = 0;
  Activation activation = Activation::relu;

  friend bool operator==(const DenseSpec&, const DenseSpec&) = default;
};

/// Architecture: stacked (bi)LSTM layers, a pooling head, optional hidden
/// dense layers and a sigmoid output layer.
struct ModelConfig {
  std::size_t input_dim = 3;
  std::vector<LstmLayerSpec> lstm_layers;
  Head head = Head::ga;
  std::vector<DenseSpec> dense;
  std::size_t outputs = 1;

  /// Throws UsageError when the shape is inconsistent.
  void validate() const;
  /// Width of the last LSTM layer's per-step output (2x cells if bidirectional).
  std::size_t lstm_output_width() const;
  /// Canonical name, e.g. "3bi(150)-ga-d40".
  std::string name() const;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

/// Parses "<layers>{bi|uni}[(<cells>)]-{fs|ga}-d<k>". `1bi` defaults to 256
/// cells and deeper stacks to 150. `d1` (also spelled `1d`) has no hidden
/// dense layer; `d<k>` for k > 1 adds a k-unit ReLU layer before the output.
/// Throws UsageError listing the accepted forms.
ModelConfig parse_config_name(const std::string& name, std::size_t outputs = 1);

/// The configurations compared in the staged experiments.
std::vector<std::string> named_configs();

}  // namespace facells::seq_model
