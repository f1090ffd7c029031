// SPDX-License-Identifier: Apache-2.0
#pragma once

// Checkpoint document:
//   {"format_version": 1,
//    "config": {"input_dim", "lstm_layers": [{"cells", "bidirectional"}],
//               "head": "fs"|"ga", "dense": [{"units", "activation"}], "outputs"},
//    "params": {"lstm0.fwd.W": [...], ...},       row-major, full precision
//    "optimizer_state": {"t", "m": {...}, "v": {...}},  optional
//    "metadata": {...}}                              optional, free-form
// Non-finite numbers are written as "NaN" / "Infinity" / "-Infinity".

#include <filesystem>
#include <optional>

#include "json.hpp"

#include "facells/seq_model/adam.hpp"
#include "facells/seq_model/params.hpp"

namespace facells::seq_model {

struct Checkpoint {
  ModelParams params;
  std::optional<AdamState> optimizer;
  nlohmann::json metadata = nlohmann::json::object();
};

nlohmann::json config_to_json(const ModelConfig& cfg);
ModelConfig config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Checkpoint& ck);
/// Throws DataError on schema problems. Non-finite parameters load as-is;
/// call params.check_finite() to reject them.
Checkpoint checkpoint_from_json(const nlohmann::json& j);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ck);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace facells::seq_model
