// SPDX-License-Identifier: Apache-2.0
#pragma once

// Synthetic face sketches used as a desk-scale stand-in for a portrait
// dataset. Every drawing has a two-stroke face oval, eyebrows, eyes, a nose
// and a mouth on a 256x256 canvas. Half of them (seeded coin flip) also wear
// glasses: two circles around the eyes joined by a bridge. A second coin
// flip bends the mouth into a smile. Labels: "glasses", "smiling" (+-1).
// Positions are jittered and strokes come out shuffled and randomly
// reversed.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "facells/sketch/drawing.hpp"

namespace facells::train_eval {

struct Disc {
  sketch::Point center;
  double radius = 0.0;

  bool contains(sketch::Point p) const { return sketch::distance(p, center) <= radius; }
};

/// Nominal geometry of the generator, before jitter.
struct ToyLayout {
  static constexpr double kCanvas = 256.0;
  static constexpr double kLensRadius = 20.0;
  /// Largest displacement jitter can apply to any lens point.
  static constexpr double kMaxJitter = 10.0;
  sketch::Point left_eye{98.0, 112.0};
  sketch::Point right_eye{158.0, 112.0};
  sketch::Point mouth{128.0, 182.0};

  /// Discs that contain every lens point of every generated drawing.
  std::vector<Disc> glasses_regions() const;
  /// A single disc around the mouth with the same total area as
  /// glasses_regions(), disjoint from them.
  Disc control_region() const;
};

/// Throws UsageError for n < 2.
std::vector<sketch::Drawing> make_toy_dataset(std::size_t n, std::uint64_t seed);

}  // namespace facells::train_eval
