// SPDX-License-Identifier: Apache-2.0
#include "facells/seq_model/params.hpp"

#include <cmath>

#include "facells/error.hpp"
#include "facells/rng.hpp"

namespace facells::seq_model {

std::size_t ParamLayout::add(const std::string& name, std::size_t rows, std::size_t cols) {
  blocks_.push_back({name, size_, rows, cols});
  size_ += rows * cols;
  return blocks_.back().offset;
}

ParamLayout::ParamLayout(const ModelConfig& cfg) {
  cfg.validate();
  std::size_t in = cfg.input_dim;
  for (std::size_t l = 0; l < cfg.lstm_layers.size(); ++l) {
    const auto& spec = cfg.lstm_layers[l];
    std::array<LstmSlots, 2> slots{};
    const int dirs = spec.bidirectional ? 2 : 1;
    for (int d = 0; d < dirs; ++d) {
      const std::string prefix = "lstm" + std::to_string(l) + (d == 0 ? ".fwd" : ".bwd");
      LstmSlots& s = slots[d];
      s.in = in;
      s.cells = spec.cells;
      s.w = add(prefix + ".W", 4 * spec.cells, in);
      s.u = add(prefix + ".U", 4 * spec.cells, spec.cells);
      s.b = add(prefix + ".b", 4 * spec.cells, 1);
    }
    lstm_.push_back(slots);
    in = spec.bidirectional ? 2 * spec.cells : spec.cells;
  }
  for (std::size_t k = 0; k < cfg.dense.size(); ++k) {
    DenseSlots s;
    s.in = in;
    s.out = cfg.dense[k].units;
    s.activation = cfg.dense[k].activation;
    s.w = add("dense" + std::to_string(k) + ".W", s.out, s.in);
    s.b = add("dense" + std::to_string(k) + ".b", s.out, 1);
    dense_.push_back(s);
    in = s.out;
  }
  output_.in = in;
  output_.out = cfg.outputs;
  output_.activation = Activation::none;
  output_.w = add("out.W", cfg.outputs, in);
  output_.b = add("out.b", cfg.outputs, 1);
}

ModelParams ModelParams::zeros(const ModelConfig& cfg) {
  ModelParams p{cfg, ParamLayout(cfg), {}};
  p.values.assign(p.layout.size(), 0.0);
  return p;
}

ModelParams ModelParams::init(const ModelConfig& cfg, std::uint64_t seed) {
  ModelParams p = zeros(cfg);
  Rng rng(seed);
  for (const ParamBlock& b : p.layout.blocks()) {
    if (b.name.ends_with(".b")) continue;
    const double k = 1.0 / std::sqrt(static_cast<double>(b.cols));
    for (std::size_t i = 0; i < b.size(); ++i) p.values[b.offset + i] = uniform_real(rng, -k, k);
  }
  for (std::size_t l = 0; l < p.layout.lstm_layers(); ++l) {
    const int dirs = cfg.lstm_layers[l].bidirectional ? 2 : 1;
    for (int d = 0; d < dirs; ++d) {
      const LstmSlots& s = p.layout.lstm(l)[d];
      for (std::size_t j = 0; j < s.cells; ++j) p.values[s.b + s.cells + j] = 1.0;
    }
  }
  return p;
}

void ModelParams::check_finite() const {
  for (const ParamBlock& b : layout.blocks()) {
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (!std::isfinite(values[b.offset + i])) {
        throw NumericError("parameter block '" + b.name + "' holds a non-finite value");
      }
    }
  }
}

}  // namespace facells::seq_model
