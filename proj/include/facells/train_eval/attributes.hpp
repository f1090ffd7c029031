// SPDX-License-Identifier: Apache-2.0
#pragma once

// Attribute tables in the CelebA list_attr layout:
//   line 1: number of rows
//   line 2: space-separated attribute names
//   then:   <image_id> v1 ... vN   with v in {-1, 1}

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "facells/sketch/drawing.hpp"

namespace facells::train_eval {

class AttributeTable {
 public:
  AttributeTable() = default;
  explicit AttributeTable(std::vector<std::string> names);

  /// Appends a row of +-1 values. Throws DataError on a duplicate id, a
  /// wrong value count or a value outside {-1, 1}.
  void add_row(const std::string& id, std::vector<int> values);

  const std::vector<std::string>& names() const { return names_; }
  const std::vector<std::string>& ids() const { return ids_; }
  std::size_t rows() const { return ids_.size(); }

  /// Column of an attribute; throws UsageError naming the known attributes.
  std::size_t column(const std::string& name) const;
  /// Row of an id. Ids match exactly or with the file extension ignored on
  /// either side ("000001.jpg" matches drawing "000001").
  std::optional<std::size_t> row(const std::string& id) const;
  int value(std::size_t row, std::size_t column) const { return values_[row][column]; }
  /// Training target for (row, column): -1 -> 0, +1 -> 1.
  double target(std::size_t row, std::size_t column) const {
    return values_[row][column] > 0 ? 1.0 : 0.0;
  }

 private:
  std::vector<std::string> names_;
  std::vector<std::string> ids_;
  std::vector<std::vector<int>> values_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

/// Throws DataError with the 1-based line number of the first bad line.
AttributeTable load_attributes(std::istream& in);
AttributeTable load_attributes(const std::filesystem::path& path);
void write_attributes(std::ostream& out, const AttributeTable& t);
void write_attributes(const std::filesystem::path& path, const AttributeTable& t);

/// Table built from the drawings' own labels; a drawing missing a label
/// gets -1 for it.
AttributeTable attributes_from_labels(const std::vector<sketch::Drawing>& drawings);

}  // namespace facells::train_eval
