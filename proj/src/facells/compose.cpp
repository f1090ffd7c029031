// SPDX-License-Identifier: Apache-2.0
#include "facells/facells/compose.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "facells/rng.hpp"

namespace facells::scoring {

AnnotatedDrawing filter_lines(const sketch::Drawing& d, const PointScores& scores,
                              const FaCellSpec& spec, double line_fraction) {
  if (scores.steps != d.point_count()) {
    throw DataError("scores for '" + scores.id + "' have " + std::to_string(scores.steps) +
                    " steps but the drawing has " + std::to_string(d.point_count()) + " points");
  }
  if (spec.column >= scores.outputs) throw UsageError("attribute column out of range");
  if (!(line_fraction >= 0.0 && line_fraction <= 1.0)) {
    throw UsageError("line fraction must lie in [0, 1]");
  }
  AnnotatedDrawing out{d, {}, {}};
  std::size_t t = 0;
  for (const auto& s : d.strokes()) {
    std::size_t passed = 0;
    for (std::size_t i = 0; i < s.size(); ++i, ++t) {
      const bool ok = spec.passes(scores.at(t, spec.column));
      out.point_passed.push_back(ok);
      passed += ok;
    }
    out.stroke_marked.push_back(static_cast<double>(passed) >=
                                line_fraction * static_cast<double>(s.size()));
  }
  return out;
}

double FaCellImage::mass_in_disc(sketch::Point center, double radius) const {
  double total = 0.0;
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      const sketch::Point c{static_cast<double>(x) + 0.5, static_cast<double>(y) + 0.5};
      if (sketch::distance(c, center) <= radius) total += at(x, y);
    }
  }
  return total;
}

FaCellImage compose_facell(const std::vector<ScoredDrawing>& items, const FaCellSpec& spec,
                           std::uint64_t seed) {
  if (spec.count == 0) throw UsageError("the drawing count must be at least 1");
  std::vector<const ScoredDrawing*> qualifying;
  for (const auto& it : items) {
    if (spec.column >= it.scores.outputs) throw UsageError("attribute column out of range");
    const double logit = it.scores.logits[spec.column];
    const bool ok = spec.polarity == Polarity::positive ? logit > 0.0 : logit < 0.0;
    if (ok) qualifying.push_back(&it);
  }
  if (qualifying.size() < spec.count) throw NotEnoughDrawings(qualifying.size(), spec.count);
  std::stable_sort(qualifying.begin(), qualifying.end(),
                   [](const ScoredDrawing* a, const ScoredDrawing* b) {
                     return a->drawing.id() < b->drawing.id();
                   });
  Rng rng(seed);
  shuffle(qualifying, rng);
  qualifying.resize(spec.count);

  const auto& first = qualifying.front()->drawing;
  FaCellImage img;
  img.width = static_cast<std::size_t>(std::ceil(first.width()));
  img.height = static_cast<std::size_t>(std::ceil(first.height()));
  img.mass.assign(img.width * img.height, 0.0);
  for (const ScoredDrawing* it : qualifying) {
    const auto& d = it->drawing;
    if (d.width() != first.width() || d.height() != first.height()) {
      throw DataError("drawing '" + d.id() + "' has a different canvas size");
    }
    const auto ann = filter_lines(d, it->scores, spec);
    img.used_ids.push_back(d.id());
    std::size_t t = 0;
    for (const auto& s : d.strokes()) {
      for (const auto& p : s.points()) {
        if (ann.point_passed[t++]) {
          img.points.push_back(p);
          const auto px = std::min(img.width - 1, static_cast<std::size_t>(std::max(0.0, std::floor(p.x))));
          const auto py = std::min(img.height - 1, static_cast<std::size_t>(std::max(0.0, std::floor(p.y))));
          img.mass[py * img.width + px] += 1.0;
        }
      }
    }
  }
  return img;
}

std::string facell_svg(const FaCellImage& img, double opacity) {
  std::ostringstream ss;
  ss << std::setprecision(10);
  ss << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << img.width << "\" height=\""
     << img.height << "\" viewBox=\"0 0 " << img.width << ' ' << img.height << "\">\n";
  ss << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  ss << "<g fill=\"black\" fill-opacity=\"" << opacity << "\">\n";
  for (const auto& p : img.points) {
    ss << "<circle cx=\"" << p.x << "\" cy=\"" << p.y << "\" r=\"1\"/>\n";
  }
  ss << "</g>\n</svg>\n";
  return ss.str();
}

vectorizer::RasterImage facell_raster(const FaCellImage& img, double opacity) {
  vectorizer::RasterImage r(static_cast<int>(img.width), static_cast<int>(img.height),
                            static_cast<std::uint8_t>(255));
  for (std::size_t i = 0; i < img.mass.size(); ++i) {
    const double v = std::clamp(255.0 - 255.0 * opacity * img.mass[i], 0.0, 255.0);
    r.pixels[i] = static_cast<std::uint8_t>(std::lround(v));
  }
  return r;
}

}  // namespace facells::scoring
