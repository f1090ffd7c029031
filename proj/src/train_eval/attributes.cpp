// SPDX-License-Identifier: Apache-2.0
#include "facells/train_eval/attributes.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "facells/error.hpp"

namespace facells::train_eval {
namespace {

std::string strip_extension(const std::string& id) {
  const auto dot = id.rfind('.');
  return dot == std::string::npos || dot == 0 ? id : id.substr(0, dot);
}

}  // namespace

AttributeTable::AttributeTable(std::vector<std::string> names) : names_(std::move(names)) {}

void AttributeTable::add_row(const std::string& id, std::vector<int> values) {
  if (values.size() != names_.size()) {
    throw DataError("row '" + id + "' has " + std::to_string(values.size()) + " values, expected " +
                    std::to_string(names_.size()));
  }
  for (int v : values) {
    if (v != 1 && v != -1) throw DataError("row '" + id + "' has a value outside {-1, 1}");
  }
  const std::string key = strip_extension(id);
  if (by_id_.contains(key)) throw DataError("duplicate id '" + id + "'");
  by_id_.emplace(key, ids_.size());
  ids_.push_back(id);
  values_.push_back(std::move(values));
}

std::size_t AttributeTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  std::string known;
  for (const auto& n : names_) known += " " + n;
  throw UsageError("unknown attribute '" + name + "'; known:" + known);
}

std::optional<std::size_t> AttributeTable::row(const std::string& id) const {
  auto it = by_id_.find(strip_extension(id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

AttributeTable load_attributes(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };
  auto fail = [&](const std::string& what) -> DataError {
    return DataError("attributes line " + std::to_string(lineno) + ": " + what);
  };

  if (!next_line()) throw DataError("attributes: empty file");
  std::size_t declared = 0;
  {
    std::istringstream ss(line);
    long long n = -1;
    std::string extra;
    if (!(ss >> n) || n < 0 || (ss >> extra)) throw fail("expected the row count");
    declared = static_cast<std::size_t>(n);
  }
  if (!next_line()) throw DataError("attributes: missing the attribute-name line");
  std::vector<std::string> names;
  {
    std::istringstream ss(line);
    std::string n;
    while (ss >> n) names.push_back(n);
  }
  if (names.empty()) throw fail("no attribute names");
  if (std::set<std::string>(names.begin(), names.end()).size() != names.size()) {
    throw fail("duplicate attribute names");
  }
  AttributeTable t(std::move(names));
  while (next_line()) {
    std::istringstream ss(line);
    std::string id;
    if (!(ss >> id)) continue;
    std::vector<int> values;
    std::string tok;
    while (ss >> tok) {
      if (tok == "1" || tok == "+1") values.push_back(1);
      else if (tok == "-1") values.push_back(-1);
      else throw fail("row '" + id + "': value '" + tok + "' is not -1 or 1");
    }
    if (values.size() != t.names().size()) {
      throw fail("row '" + id + "' has " + std::to_string(values.size()) + " values, expected " +
                 std::to_string(t.names().size()));
    }
    try {
      t.add_row(id, std::move(values));
    } catch (const DataError& e) {
      throw fail(e.what());
    }
  }
  if (t.rows() != declared) {
    throw DataError("attributes: header declares " + std::to_string(declared) + " rows, found " +
                    std::to_string(t.rows()));
  }
  return t;
}

AttributeTable load_attributes(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return load_attributes(in);
}

void write_attributes(std::ostream& out, const AttributeTable& t) {
  out << t.rows() << '\n';
  for (std::size_t i = 0; i < t.names().size(); ++i) out << (i ? " " : "") << t.names()[i];
  out << '\n';
  for (std::size_t r = 0; r < t.rows(); ++r) {
    out << t.ids()[r];
    for (std::size_t c = 0; c < t.names().size(); ++c) out << ' ' << t.value(r, c);
    out << '\n';
  }
}

void write_attributes(const std::filesystem::path& path, const AttributeTable& t) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  write_attributes(out, t);
}

AttributeTable attributes_from_labels(const std::vector<sketch::Drawing>& drawings) {
  std::set<std::string> names;
  for (const auto& d : drawings) {
    for (const auto& [k, v] : d.labels()) names.insert(k);
  }
  AttributeTable t(std::vector<std::string>(names.begin(), names.end()));
  for (const auto& d : drawings) {
    std::vector<int> row;
    for (const auto& n : t.names()) {
      auto it = d.labels().find(n);
      row.push_back(it == d.labels().end() ? -1 : it->second);
    }
    t.add_row(d.id(), std::move(row));
  }
  return t;
}

}  // namespace facells::train_eval
