// SPDX-License-Identifier: Apache-2.0
#pragma once

// Raster portrait -> stroke drawing: Canny edge detection followed by greedy
// tracing of 8-connected edge pixels into polylines, simplified with
// Ramer-Douglas-Peucker.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "facells/sketch/drawing.hpp"
#include "facells/vectorizer/raster.hpp"

namespace facells::vectorizer {

struct VectorizeConfig {
  double blur_sigma = 1.4;
  double canny_low = 50.0;
  double canny_high = 120.0;
  int min_stroke_points = 4;
  double simplify_epsilon = 1.0;

  /// Throws UsageError when a field is out of range.
  void validate() const;
};

/// Binary edge mask, 1 = edge pixel.
struct EdgeMap {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> on;

  bool at(int x, int y) const { return on[static_cast<std::size_t>(y) * width + x] != 0; }
  std::size_t count() const;
};

/// Gaussian blur, 3x3 Sobel gradients, non-maximum suppression and
/// double-threshold hysteresis. Thresholds are in Sobel magnitude units of
/// the 8-bit image. Throws DataError for images smaller than 3x3.
EdgeMap canny_edges(const RasterImage& img, const VectorizeConfig& cfg);

/// Traces edge pixels into strokes in row-major discovery order. Points are
/// integer pixel coordinates on a width x height canvas.
sketch::Drawing trace_strokes(const EdgeMap& edges, const VectorizeConfig& cfg,
                              const std::string& id = {});

/// Raw traced pixel chains before the length filter and simplification.
std::vector<std::vector<sketch::Point>> trace_chains(const EdgeMap& edges);

/// Ramer-Douglas-Peucker; keeps both endpoints.
std::vector<sketch::Point> simplify_rdp(std::span<const sketch::Point> pts, double epsilon);

sketch::Drawing vectorize(const RasterImage& img, const VectorizeConfig& cfg,
                          const std::string& id = {});

}  // namespace facells::vectorizer
