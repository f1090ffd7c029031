// SPDX-License-Identifier: Apache-2.0
#include "facells/seq_model/config.hpp"

#include <regex>

#include "facells/error.hpp"

namespace facells::seq_model {

void ModelConfig::validate() const {
  if (input_dim == 0) throw UsageError("model input_dim must be positive");
  if (lstm_layers.empty()) throw UsageError("model needs at least one LSTM layer");
  for (const auto& l : lstm_layers) {
    if (l.cells == 0) throw UsageError("LSTM layers need at least one cell");
  }
  for (const auto& d : dense) {
    if (d.units == 0) throw UsageError("dense layers need at least one unit");
  }
  if (outputs == 0) throw UsageError("model needs at least one output");
}

std::size_t ModelConfig::lstm_output_width() const {
  const auto& last = lstm_layers.back();
  return last.bidirectional ? 2 * last.cells : last.cells;
}

std::string ModelConfig::name() const {
  std::string s = std::to_string(lstm_layers.size());
  s += lstm_layers.front().bidirectional ? "bi" : "uni";
  s += "(" + std::to_string(lstm_layers.front().cells) + ")";
  s += head == Head::fs ? "-fs" : "-ga";
  s += dense.empty() ? "-d1" : "-d" + std::to_string(dense.front().units);
  return s;
}

ModelConfig parse_config_name(const std::string& name, std::size_t outputs) {
  static const std::regex re(R"(^(\d{1,6})(bi|uni)(?:\((\d{1,6})\))?-(fs|ga)-(?:d(\d{1,6})|1d)$)");
  auto reject = [&](const std::string& why) {
    std::string valid;
    for (const auto& n : named_configs()) valid += " " + n;
    return UsageError("unknown config '" + name + "' (" + why + "); valid names:" + valid +
                      " (cell count override: e.g. 1bi(16)-ga-d1)");
  };
  std::smatch m;
  if (!std::regex_match(name, m, re)) throw reject("not of the form <layers>bi|uni-fs|ga-d<k>");
  const std::size_t layers = std::stoul(m[1].str());
  if (layers == 0 || layers > 16) throw reject("layer count must be 1..16");
  const bool bi = m[2].str() == "bi";
  const std::size_t cells = m[3].matched ? std::stoul(m[3].str()) : (layers == 1 ? 256 : 150);
  if (cells == 0) throw reject("cell count must be positive");
  ModelConfig cfg;
  cfg.lstm_layers.assign(layers, LstmLayerSpec{cells, bi});
  cfg.head = m[4].str() == "fs" ? Head::fs : Head::ga;
  const std::size_t d = m[5].matched ? std::stoul(m[5].str()) : 1;
  if (d == 0) throw reject("dense size must be positive");
  if (d > 1) cfg.dense.push_back({d, Activation::relu});
  cfg.outputs = outputs;
  cfg.validate();
  return cfg;
}

std::vector<std::string> named_configs() {
  return {"1bi-fs-d1",  "1bi-fs-d40", "1bi-ga-d1", "1bi-ga-d40",
          "3bi-fs-d1",  "3bi-fs-d40", "3bi-ga-d1", "3bi-ga-d40"};
}

}  // namespace facells::seq_model
