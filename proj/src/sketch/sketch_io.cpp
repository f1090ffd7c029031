// SPDX-License-Identifier: Apache-2.0
#include "facells/sketch/sketch_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "facells/error.hpp"

namespace facells::sketch {

using nlohmann::json;

json to_json(const Drawing& d) {
  json strokes = json::array();
  for (const Stroke& s : d.strokes()) {
    json pts = json::array();
    for (const Point& p : s.points()) pts.push_back({p.x, p.y});
    strokes.push_back(std::move(pts));
  }
  json j{{"id", d.id()}, {"width", d.width()}, {"height", d.height()}, {"strokes", strokes}};
  if (!d.labels().empty()) j["labels"] = d.labels();
  return j;
}

Drawing drawing_from_json(const json& j) {
  if (!j.is_object()) throw DataError("drawing record must be a JSON object");
  auto need = [&](const char* key) -> const json& {
    auto it = j.find(key);
    if (it == j.end()) throw DataError(std::string("missing field '") + key + "'");
    return *it;
  };
  const json& id = need("id");
  const json& w = need("width");
  const json& h = need("height");
  const json& strokes = need("strokes");
  if (!id.is_string()) throw DataError("field 'id' must be a string");
  if (!w.is_number() || !h.is_number()) throw DataError("fields 'width'/'height' must be numbers");
  if (!strokes.is_array()) throw DataError("field 'strokes' must be an array");

  std::vector<Stroke> out;
  out.reserve(strokes.size());
  for (const json& s : strokes) {
    if (!s.is_array()) throw DataError("each stroke must be an array of [x, y] pairs");
    std::vector<Point> pts;
    pts.reserve(s.size());
    for (const json& p : s) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
        throw DataError("each point must be an [x, y] number pair");
      }
      pts.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    out.emplace_back(std::move(pts));
  }

  Labels labels;
  if (auto it = j.find("labels"); it != j.end()) {
    if (!it->is_object()) throw DataError("field 'labels' must be an object");
    for (const auto& [name, v] : it->items()) {
      if (!v.is_number_integer()) throw DataError("label '" + name + "' must be 1 or -1");
      labels[name] = v.get<int>();
    }
  }
  return Drawing(id.get<std::string>(), w.get<double>(), h.get<double>(), std::move(out),
                 std::move(labels));
}

std::vector<Drawing> read_jsonl(std::istream& in) {
  std::vector<Drawing> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(drawing_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw DataError("line " + std::to_string(lineno) + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<Drawing> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return read_jsonl(in);
}

void write_jsonl(std::ostream& out, const std::vector<Drawing>& drawings) {
  for (const Drawing& d : drawings) out << to_json(d).dump() << '\n';
}

void write_jsonl(const std::filesystem::path& path, const std::vector<Drawing>& drawings) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  write_jsonl(out, drawings);
}

json to_json(const EncodedSequence& s, const std::string& id) {
  json triples = json::array();
  for (const Triple& t : s.triples) triples.push_back({t.a, t.b, static_cast<int>(t.p)});
  return json{{"id", id},
              {"format", format_name(s.format)},
              {"coords", coord_mode_name(s.coords)},
              {"triples", triples}};
}

std::string to_svg(const Drawing& d, const std::vector<bool>& highlight,
                   const std::string& highlight_color) {
  std::ostringstream svg;
  svg << std::setprecision(10);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << d.width() << ' '
      << d.height() << "\" width=\"" << d.width() << "\" height=\"" << d.height() << "\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << d.width() << "\" height=\"" << d.height()
      << "\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < d.strokes().size(); ++i) {
    const bool marked = i < highlight.size() && highlight[i];
    svg << "<polyline fill=\"none\" stroke=\"" << (marked ? highlight_color : "black")
        << "\" stroke-width=\"1\" points=\"";
    const auto& pts = d.strokes()[i].points();
    for (std::size_t k = 0; k < pts.size(); ++k) {
      if (k) svg << ' ';
      svg << pts[k].x << ',' << pts[k].y;
    }
    svg << "\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace facells::sketch
