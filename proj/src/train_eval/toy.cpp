// SPDX-License-Identifier: Apache-2.0
#include "facells/train_eval/toy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <iomanip>

#include "facells/error.hpp"
#include "facells/rng.hpp"

namespace facells::train_eval {

using sketch::Point;
using sketch::Stroke;

std::vector<Disc> ToyLayout::glasses_regions() const {
  const double r = kLensRadius + kMaxJitter;
  return {Disc{left_eye, r}, Disc{right_eye, r}};
}

Disc ToyLayout::control_region() const {
  return Disc{mouth, (kLensRadius + kMaxJitter) * std::numbers::sqrt2};
}

namespace {

constexpr double kPi = std::numbers::pi;

Point clamp_to_canvas(Point p) {
  return {std::clamp(p.x, 0.0, ToyLayout::kCanvas), std::clamp(p.y, 0.0, ToyLayout::kCanvas)};
}

// Points on an ellipse arc from angle a0 to a1 (radians, y down).
std::vector<Point> arc(Point c, double rx, double ry, double a0, double a1, std::size_t segments) {
  std::vector<Point> pts;
  for (std::size_t i = 0; i <= segments; ++i) {
    const double a = a0 + (a1 - a0) * static_cast<double>(i) / static_cast<double>(segments);
    pts.push_back(clamp_to_canvas({c.x + rx * std::cos(a), c.y + ry * std::sin(a)}));
  }
  return pts;
}

// Parabola through (x0, y), (x1, y) with vertex offset `sag` at the middle.
std::vector<Point> curve(Point c, double half_width, double sag, std::size_t segments) {
  std::vector<Point> pts;
  for (std::size_t i = 0; i <= segments; ++i) {
    const double u = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(segments);
    pts.push_back(clamp_to_canvas({c.x + u * half_width, c.y + sag * (1.0 - u * u)}));
  }
  return pts;
}

Point jitter(Rng& rng, Point p, double amount) {
  return {p.x + uniform_real(rng, -amount, amount), p.y + uniform_real(rng, -amount, amount)};
}

std::string toy_id(std::size_t i) {
  std::ostringstream ss;
  ss << "toy-" << std::setw(6) << std::setfill('0') << i;
  return ss.str();
}

sketch::Drawing make_face(Rng& rng, std::size_t index) {
  const ToyLayout L;
  const bool glasses = uniform_index(rng, 2) == 1;
  const bool smiling = uniform_index(rng, 2) == 1;
  // Global plus per-feature shift, at most 6 per axis: 6 * sqrt(2) plus the
  // lens radius jitter stays below kMaxJitter.
  const Point shift{uniform_real(rng, -4.0, 4.0), uniform_real(rng, -4.0, 4.0)};
  auto place = [&](Point p) { return jitter(rng, {p.x + shift.x, p.y + shift.y}, 2.0); };
  const double scale = uniform_real(rng, 0.95, 1.05);

  std::vector<Stroke> strokes;
  const Point face = place({128.0, 134.0});
  const double rx = 76.0 * scale, ry = 96.0 * scale;
  strokes.emplace_back(arc(face, rx, ry, -kPi / 2, kPi / 2, 18));
  strokes.emplace_back(arc(face, rx, ry, kPi / 2, 3 * kPi / 2, 18));

  const Point le = place(L.left_eye), re = place(L.right_eye);
  for (Point e : {le, re}) {
    strokes.emplace_back(curve({e.x, e.y - 22.0}, 13.0, -4.0, 4));  // eyebrow
    strokes.emplace_back(curve(e, 9.0, 2.5, 5));                    // eye
  }
  const Point nose = place({128.0, 138.0});
  strokes.emplace_back(std::vector<Point>{{nose.x, nose.y - 18.0}, {nose.x - 6.0, nose.y + 10.0},
                                          {nose.x + 4.0, nose.y + 12.0}});
  const Point mouth = place(L.mouth);
  strokes.emplace_back(curve(mouth, 22.0, smiling ? 9.0 : -1.5, 8));

  if (glasses) {
    const double r = ToyLayout::kLensRadius * uniform_real(rng, 0.96, 1.04);
    strokes.emplace_back(arc(le, r, r, 0.0, 2 * kPi, 16));
    strokes.emplace_back(arc(re, r, r, kPi, 3 * kPi, 16));
    strokes.emplace_back(curve({(le.x + re.x) / 2, (le.y + re.y) / 2 - 2.0},
                               (re.x - le.x) / 2 - r, -3.0, 3));
  }

  shuffle(strokes, rng);
  for (auto& s : strokes) {
    if (uniform_index(rng, 2) == 1) s = s.reversed();
  }
  return sketch::Drawing(toy_id(index), ToyLayout::kCanvas, ToyLayout::kCanvas, std::move(strokes),
                         {{"glasses", glasses ? 1 : -1}, {"smiling", smiling ? 1 : -1}});
}

}  // namespace

std::vector<sketch::Drawing> make_toy_dataset(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw UsageError("make_toy_dataset needs n >= 2");
  Rng rng(seed);
  std::vector<sketch::Drawing> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(make_face(rng, i));
  return out;
}

}  // namespace facells::train_eval
