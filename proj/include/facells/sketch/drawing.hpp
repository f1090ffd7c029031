// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace facells::sketch {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// A polyline drawn without lifting the pen. Holds at least two finite points.
class Stroke {
 public:
  /// Throws DataError for fewer than two points or non-finite coordinates.
  explicit Stroke(std::vector<Point> points);

  const std::vector<Point>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  Point front() const { return points_.front(); }
  Point back() const { return points_.back(); }

  Stroke reversed() const;
  /// Polyline length.
  double length() const;

  friend bool operator==(const Stroke&, const Stroke&) = default;

 private:
  std::vector<Point> points_;
};

/// Attribute name -> -1 / +1.
using Labels = std::map<std::string, int>;

/// An ordered list of strokes on a width x height canvas, y pointing down.
class Drawing {
 public:
  /// Throws DataError when the canvas is not positive, a point falls outside
  /// [0,width]x[0,height], or a label is not +-1.
  Drawing(std::string id, double width, double height, std::vector<Stroke> strokes,
          Labels labels = {});

  const std::string& id() const { return id_; }
  double width() const { return width_; }
  double height() const { return height_; }
  const std::vector<Stroke>& strokes() const { return strokes_; }
  const Labels& labels() const { return labels_; }
  std::size_t point_count() const;

  /// Same canvas, id and labels with a different stroke list.
  Drawing with_strokes(std::vector<Stroke> strokes) const;

  friend bool operator==(const Drawing&, const Drawing&) = default;

 private:
  std::string id_;
  double width_;
  double height_;
  std::vector<Stroke> strokes_;
  Labels labels_;
};

/// Sum of stroke polyline lengths.
double total_ink_length(const Drawing& d);
/// Travel between consecutive strokes: last point of stroke i to first point
/// of stroke i+1, in the current order.
double pen_up_length(const Drawing& d);

}  // namespace facells::sketch
