// SPDX-License-Identifier: Apache-2.0
#pragma once

// Line filtering by per-point score and FaCell composition: the passing
// points of many drawings overlaid on one canvas.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "facells/error.hpp"
#include "facells/facells/scores.hpp"
#include "facells/sketch/drawing.hpp"
#include "facells/vectorizer/raster.hpp"

namespace facells::scoring {

enum class Polarity { positive, negative };

struct FaCellSpec {
  std::string attribute;
  std::size_t column = 0;  ///< output column of the attribute
  std::size_t count = 1;   ///< X
  double threshold = 0.0;  ///< Y, in logit units
  Polarity polarity = Polarity::positive;

  /// positive: score > Y; negative: score < -Y.
  bool passes(double score) const {
    return polarity == Polarity::positive ? score > threshold : score < -threshold;
  }
};

struct AnnotatedDrawing {
  sketch::Drawing drawing;
  std::vector<bool> point_passed;   ///< flattened point order
  std::vector<bool> stroke_marked;  ///< per stroke
};

/// Marks passing points, and strokes where at least line_fraction of the
/// points pass. The scores must come from this drawing's encoding (same
/// point count); otherwise DataError.
AnnotatedDrawing filter_lines(const sketch::Drawing& d, const PointScores& scores,
                              const FaCellSpec& spec, double line_fraction = 0.5);

struct ScoredDrawing {
  sketch::Drawing drawing;
  PointScores scores;
};

class NotEnoughDrawings : public DataError {
 public:
  NotEnoughDrawings(std::size_t found, std::size_t wanted)
      : DataError("only " + std::to_string(found) + " drawings qualify, " + std::to_string(wanted) +
                  " requested"),
        found_(found) {}
  std::size_t found() const { return found_; }

 private:
  std::size_t found_;
};

struct FaCellImage {
  std::size_t width = 0;
  std::size_t height = 0;
  /// Passing points per pixel; a point at (x, y) lands in pixel
  /// (floor(x), floor(y)), clamped to the canvas.
  std::vector<double> mass;
  std::vector<sketch::Point> points;    ///< every plotted point
  std::vector<std::string> used_ids;    ///< the X selected drawings

  double at(std::size_t x, std::size_t y) const { return mass[y * width + x]; }
  /// Sum of mass over pixels whose center lies in the disc.
  double mass_in_disc(sketch::Point center, double radius) const;
};

/// A drawing qualifies when its predicted logit for the attribute is
/// positive (negative for negative polarity). Qualifying drawings are sorted
/// by id, shuffled with `seed`, and the first X are used, so the result does
/// not depend on the input order. Throws NotEnoughDrawings when fewer than X
/// qualify and DataError when canvases differ.
FaCellImage compose_facell(const std::vector<ScoredDrawing>& items, const FaCellSpec& spec,
                           std::uint64_t seed);

/// Point markers on a white canvas, each with the given fill opacity.
std::string facell_svg(const FaCellImage& img, double opacity = 0.05);
/// Grayscale: 255 - 255 * opacity * mass, clamped to [0, 255].
vectorizer::RasterImage facell_raster(const FaCellImage& img, double opacity = 0.05);

}  // namespace facells::scoring
