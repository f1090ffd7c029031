// SPDX-License-Identifier: Apache-2.0
#pragma once

// Interchange formats for drawings.
//
// JSONL: one object per line
//   {"id": "...", "width": W, "height": H,
//    "strokes": [[[x, y], ...], ...], "labels": {"Male": 1, ...}}
// in raw canvas units with y pointing down. "labels" is optional.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "facells/sketch/drawing.hpp"
#include "facells/sketch/encoding.hpp"

namespace facells::sketch {

nlohmann::json to_json(const Drawing& d);
/// Throws DataError describing the first missing or ill-typed field.
Drawing drawing_from_json(const nlohmann::json& j);

/// Throws DataError with the 1-based line number of the first bad record.
std::vector<Drawing> read_jsonl(std::istream& in);
std::vector<Drawing> read_jsonl(const std::filesystem::path& path);
void write_jsonl(std::ostream& out, const std::vector<Drawing>& drawings);
void write_jsonl(const std::filesystem::path& path, const std::vector<Drawing>& drawings);

/// {"id", "format", "coords", "triples": [[a, b, p], ...]}
nlohmann::json to_json(const EncodedSequence& s, const std::string& id);


/// One <polyline> per stroke on a white background, viewBox = canvas.
/// `highlight` (optional, one flag per stroke) draws flagged strokes in
/// `highlight_color`.
std::string to_svg(const Drawing& d, const std::vector<bool>& highlight = {},
                   const std::string& highlight_color = "red");

}  // namespace facells::sketch
