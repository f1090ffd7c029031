// SPDX-License-Identifier: Apache-2.0
#include "facells/seq_model/checkpoint.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "facells/error.hpp"

namespace facells::seq_model {

using nlohmann::json;

namespace {

json number(double v) {
  if (std::isnan(v)) return "NaN";
  if (std::isinf(v)) return v > 0 ? "Infinity" : "-Infinity";
  return v;
}

double parse_number(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "NaN") return std::numeric_limits<double>::quiet_NaN();
    if (s == "Infinity") return std::numeric_limits<double>::infinity();
    if (s == "-Infinity") return -std::numeric_limits<double>::infinity();
  }
  throw DataError("checkpoint: non-numeric value in '" + where + "'");
}

json blocks_to_json(const ParamLayout& layout, const std::vector<double>& values) {
  json out = json::object();
  for (const ParamBlock& b : layout.blocks()) {
    json arr = json::array();
    for (std::size_t i = 0; i < b.size(); ++i) arr.push_back(number(values[b.offset + i]));
    out[b.name] = std::move(arr);
  }
  return out;
}

std::vector<double> blocks_from_json(const ParamLayout& layout, const json& j,
                                     const std::string& what) {
  if (!j.is_object()) throw DataError("checkpoint: '" + what + "' must be an object");
  std::vector<double> values(layout.size());
  for (const ParamBlock& b : layout.blocks()) {
    auto it = j.find(b.name);
    if (it == j.end()) throw DataError("checkpoint: " + what + " lacks block '" + b.name + "'");
    if (!it->is_array() || it->size() != b.size()) {
      throw DataError("checkpoint: block '" + b.name + "' should hold " +
                      std::to_string(b.size()) + " numbers");
    }
    for (std::size_t i = 0; i < b.size(); ++i) values[b.offset + i] = parse_number((*it)[i], b.name);
  }
  return values;
}

}  // namespace

json config_to_json(const ModelConfig& cfg) {
  json layers = json::array();
  for (const auto& l : cfg.lstm_layers) layers.push_back({{"cells", l.cells}, {"bidirectional", l.bidirectional}});
  json dense = json::array();
  for (const auto& d : cfg.dense) {
    dense.push_back({{"units", d.units}, {"activation", d.activation == Activation::relu ? "relu" : "none"}});
  }
  return {{"input_dim", cfg.input_dim},
          {"lstm_layers", layers},
          {"head", cfg.head == Head::fs ? "fs" : "ga"},
          {"dense", dense},
          {"outputs", cfg.outputs}};
}

ModelConfig config_from_json(const json& j) {
  try {
    ModelConfig cfg;
    cfg.input_dim = j.at("input_dim").get<std::size_t>();
    for (const auto& l : j.at("lstm_layers")) {
      cfg.lstm_layers.push_back({l.at("cells").get<std::size_t>(), l.at("bidirectional").get<bool>()});
    }
    const auto head = j.at("head").get<std::string>();
    if (head != "fs" && head != "ga") throw DataError("checkpoint: head must be fs or ga");
    cfg.head = head == "fs" ? Head::fs : Head::ga;
    for (const auto& d : j.at("dense")) {
      const auto act = d.at("activation").get<std::string>();
      if (act != "relu" && act != "none") throw DataError("checkpoint: unknown activation '" + act + "'");
      cfg.dense.push_back({d.at("units").get<std::size_t>(),
                           act == "relu" ? Activation::relu : Activation::none});
    }
    cfg.outputs = j.at("outputs").get<std::size_t>();
    cfg.validate();
    return cfg;
  } catch (const json::exception& e) {
    throw DataError(std::string("checkpoint: bad config: ") + e.what());
  } catch (const UsageError& e) {
    throw DataError(std::string("checkpoint: bad config: ") + e.what());
  }
}

json to_json(const Checkpoint& ck) {
  json j{{"format_version", 1},
         {"config", config_to_json(ck.params.config)},
         {"params", blocks_to_json(ck.params.layout, ck.params.values)}};
  if (ck.optimizer) {
    j["optimizer_state"] = {{"t", ck.optimizer->t},
                            {"m", blocks_to_json(ck.params.layout, ck.optimizer->m)},
                            {"v", blocks_to_json(ck.params.layout, ck.optimizer->v)}};
  }
  if (!ck.metadata.empty()) j["metadata"] = ck.metadata;
  return j;
}

Checkpoint checkpoint_from_json(const json& j) {
  if (!j.is_object()) throw DataError("checkpoint: document must be a JSON object");
  if (j.value("format_version", 0) != 1) throw DataError("checkpoint: unsupported format_version");
  if (!j.contains("config") || !j.contains("params")) {
    throw DataError("checkpoint: 'config' and 'params' are required");
  }
  Checkpoint ck{ModelParams::zeros(config_from_json(j["config"])), std::nullopt, json::object()};
  ck.params.values = blocks_from_json(ck.params.layout, j["params"], "params");
  if (auto it = j.find("optimizer_state"); it != j.end() && !it->is_null()) {
    AdamState st;
    st.t = it->value("t", std::size_t{0});
    st.m = blocks_from_json(ck.params.layout, it->at("m"), "optimizer_state.m");
    st.v = blocks_from_json(ck.params.layout, it->at("v"), "optimizer_state.v");
    ck.optimizer = std::move(st);
  }
  if (auto it = j.find("metadata"); it != j.end() && it->is_object()) ck.metadata = *it;
  return ck;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ck) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << to_json(ck).dump() << '\n';
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return checkpoint_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw DataError("checkpoint " + path.string() + ": " + e.what());
  }
}

}  // namespace facells::seq_model
