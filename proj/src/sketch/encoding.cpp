// SPDX-License-Identifier: Apache-2.0
#include "facells/sketch/encoding.hpp"

#include <algorithm>
#include <utility>

namespace facells::sketch {
namespace {

struct Frame {
  double cx = 0.0;
  double cy = 0.0;
  double scale = 1.0;
};

// Absolute coordinates are expressed in this frame; relative ones measure
// offsets, so they only use the scale.
Frame frame_for(double width, double height, CoordMode mode) {
  if (mode == CoordMode::raw) return {0.0, 0.0, 1.0};
  return {width / 2.0, height / 2.0, 2.0 / std::max(width, height)};
}

PenState pen_for(std::size_t i, std::size_t n) {
  if (i == 0) return PenState::begin;
  if (i + 1 == n) return PenState::end;
  return PenState::cont;
}

}  // namespace

EncodedSequence encode_absolute(const Drawing& d, CoordMode mode) {
  const Frame f = frame_for(d.width(), d.height(), mode);
  EncodedSequence out{Format::absolute, mode, {}};
  out.triples.reserve(d.point_count());
  for (const Stroke& s : d.strokes()) {
    const auto& pts = s.points();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      out.triples.push_back({(pts[i].x - f.cx) * f.scale, (pts[i].y - f.cy) * f.scale,
                             pen_for(i, pts.size())});
    }
  }
  return out;
}

EncodedSequence encode_relative(const Drawing& d, CoordMode mode) {
  const Frame f = frame_for(d.width(), d.height(), mode);
  EncodedSequence out{Format::relative, mode, {}};
  out.triples.reserve(d.point_count());
  Point prev{d.width() / 2.0, d.height() / 2.0};
  for (const Stroke& s : d.strokes()) {
    const auto& pts = s.points();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      out.triples.push_back({(pts[i].x - prev.x) * f.scale, (pts[i].y - prev.y) * f.scale,
                             pen_for(i, pts.size())});
      prev = pts[i];
    }
  }
  return out;
}

EncodedSequence encode(const Drawing& d, Format format, CoordMode mode) {
  return format == Format::absolute ? encode_absolute(d, mode) : encode_relative(d, mode);
}

std::optional<std::size_t> pen_grammar_violation(std::span<const Triple> triples) {
  // States: outside a stroke, or inside one after at least its first point.
  bool inside = false;
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const PenState p = triples[i].p;
    if (p != PenState::begin && p != PenState::cont && p != PenState::end) return i;
    if (!inside) {
      if (p != PenState::begin) return i;
      inside = true;
    } else {
      if (p == PenState::begin) return i;
      if (p == PenState::end) inside = false;
    }
  }
  if (inside) return triples.size();
  return std::nullopt;
}

Drawing decode(const EncodedSequence& s, double width, double height, std::string id) {
  if (auto bad = pen_grammar_violation(s.triples)) {
    const std::size_t i = *bad;
    if (i == s.triples.size()) throw MalformedSequence(i, "sequence ends inside a stroke");
    const PenState p = s.triples[i].p;
    if (p == PenState::begin) throw MalformedSequence(i, "stroke begins before the previous one ended");
    if (p == PenState::cont || p == PenState::end) {
      throw MalformedSequence(i, "pen state continues a stroke that never began");
    }
    throw MalformedSequence(i, "pen state must be +1, 0 or -1");
  }
  const Frame f = frame_for(width, height, s.coords);
  std::vector<Stroke> strokes;
  std::vector<Point> current;
  Point prev{width / 2.0, height / 2.0};
  for (std::size_t i = 0; i < s.triples.size(); ++i) {
    const Triple& t = s.triples[i];
    if (!std::isfinite(t.a) || !std::isfinite(t.b)) {
      throw MalformedSequence(i, "non-finite coordinate");
    }
    Point p;
    if (s.format == Format::absolute) {
      p = {t.a / f.scale + f.cx, t.b / f.scale + f.cy};
    } else {
      p = {prev.x + t.a / f.scale, prev.y + t.b / f.scale};
    }
    prev = p;
    current.push_back(p);
    if (t.p == PenState::end) {
      // Round-off in the inverse transform can push a boundary point a hair
      // outside the canvas; pull it back. Larger excursions are left for the
      // Drawing constructor to reject.
      const double slack = 1e-9 * std::max(width, height);
      for (Point& q : current) {
        if (q.x < 0.0 && q.x > -slack) q.x = 0.0;
        if (q.x > width && q.x < width + slack) q.x = width;
        if (q.y < 0.0 && q.y > -slack) q.y = 0.0;
        if (q.y > height && q.y < height + slack) q.y = height;
      }
      strokes.emplace_back(std::move(current));
      current.clear();
    }
  }
  return Drawing(std::move(id), width, height, std::move(strokes));
}

std::string format_name(Format f) { return f == Format::absolute ? "absolute" : "relative"; }

std::string coord_mode_name(CoordMode m) { return m == CoordMode::raw ? "raw" : "normalized"; }

Format parse_format(const std::string& s) {
  if (s == "absolute") return Format::absolute;
  if (s == "relative") return Format::relative;
  throw UsageError("unknown format '" + s + "' (expected absolute or relative)");
}

CoordMode parse_coord_mode(const std::string& s) {
  if (s == "raw") return CoordMode::raw;
  if (s == "normalized") return CoordMode::normalized;
  throw UsageError("unknown coordinate mode '" + s + "' (expected raw or normalized)");
}

}  // namespace facells::sketch
