// SPDX-License-Identifier: Apache-2.0
#include "facells/sketch/drawing.hpp"

#include <algorithm>
#include <utility>

#include "facells/error.hpp"

namespace facells::sketch {

Stroke::Stroke(std::vector<Point> points) : points_(std::move(points)) {
  if (points_.size() < 2) {
    throw DataError("stroke needs at least 2 points, got " + std::to_string(points_.size()));
  }
  for (const Point& p : points_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw DataError("stroke contains a non-finite coordinate");
    }
  }
}

Stroke Stroke::reversed() const {
  std::vector<Point> pts(points_.rbegin(), points_.rend());
  return Stroke(std::move(pts));
}

double Stroke::length() const {
  double len = 0.0;
  for (std::size_t i = 1; i < points_.size(); ++i) len += distance(points_[i - 1], points_[i]);
  return len;
}

Drawing::Drawing(std::string id, double width, double height, std::vector<Stroke> strokes,
                 Labels labels)
    : id_(std::move(id)),
      width_(width),
      height_(height),
      strokes_(std::move(strokes)),
      labels_(std::move(labels)) {
  if (!(width_ > 0.0) || !(height_ > 0.0) || !std::isfinite(width_) || !std::isfinite(height_)) {
    throw DataError("drawing '" + id_ + "': canvas must be positive and finite");
  }
  for (std::size_t s = 0; s < strokes_.size(); ++s) {
    for (const Point& p : strokes_[s].points()) {
      if (p.x < 0.0 || p.x > width_ || p.y < 0.0 || p.y > height_) {
        throw DataError("drawing '" + id_ + "': stroke " + std::to_string(s) +
                        " has a point outside the canvas");
      }
    }
  }
  for (const auto& [name, v] : labels_) {
    if (v != 1 && v != -1) {
      throw DataError("drawing '" + id_ + "': label '" + name + "' must be 1 or -1");
    }
  }
}

std::size_t Drawing::point_count() const {
  std::size_t n = 0;
  for (const Stroke& s : strokes_) n += s.size();
  return n;
}

Drawing Drawing::with_strokes(std::vector<Stroke> strokes) const {
  return Drawing(id_, width_, height_, std::move(strokes), labels_);
}

double total_ink_length(const Drawing& d) {
  double ink = 0.0;
  for (const Stroke& s : d.strokes()) ink += s.length();
  return ink;
}

double pen_up_length(const Drawing& d) {
  const auto& strokes = d.strokes();
  double travel = 0.0;
  for (std::size_t i = 1; i < strokes.size(); ++i) {
    travel += distance(strokes[i - 1].back(), strokes[i].front());
  }
  return travel;
}

}  // namespace facells::sketch
