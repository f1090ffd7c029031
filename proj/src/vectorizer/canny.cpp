// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "facells/error.hpp"
#include "facells/vectorizer/vectorize.hpp"

namespace facells::vectorizer {

void VectorizeConfig::validate() const {
  if (!(blur_sigma > 0.0)) throw UsageError("blur_sigma must be > 0");
  if (!(canny_low > 0.0) || !(canny_low < canny_high)) {
    throw UsageError("canny thresholds must satisfy 0 < low < high");
  }
  if (min_stroke_points < 2) throw UsageError("min_stroke_points must be >= 2");
  if (!(simplify_epsilon >= 0.0)) throw UsageError("simplify_epsilon must be >= 0");
}

std::size_t EdgeMap::count() const {
  return static_cast<std::size_t>(std::count(on.begin(), on.end(), std::uint8_t{1}));
}

namespace {

std::vector<double> gaussian_kernel(double sigma) {
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
    sum += k[i + radius];
  }
  for (double& v : k) v /= sum;
  return k;
}

// Separable blur with edge replication.
std::vector<double> blur(const RasterImage& img, double sigma) {
  const int w = img.width, h = img.height;
  const auto k = gaussian_kernel(sigma);
  const int r = static_cast<int>(k.size() / 2);
  std::vector<double> tmp(static_cast<std::size_t>(w) * h), out(tmp.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int i = -r; i <= r; ++i) s += k[i + r] * img.at(std::clamp(x + i, 0, w - 1), y);
      tmp[static_cast<std::size_t>(y) * w + x] = s;
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int i = -r; i <= r; ++i) {
        s += k[i + r] * tmp[static_cast<std::size_t>(std::clamp(y + i, 0, h - 1)) * w + x];
      }
      out[static_cast<std::size_t>(y) * w + x] = s;
    }
  }
  return out;
}

}  // namespace

EdgeMap canny_edges(const RasterImage& img, const VectorizeConfig& cfg) {
  cfg.validate();
  if (img.width < 3 || img.height < 3) throw DataError("image too small for edge detection (< 3x3)");
  const int w = img.width, h = img.height;
  const auto idx = [w](int x, int y) { return static_cast<std::size_t>(y) * w + x; };
  const std::vector<double> g = blur(img, cfg.blur_sigma);

  // Sobel on the interior; the one-pixel border has no gradient.
  std::vector<double> mag(g.size(), 0.0);
  std::vector<std::uint8_t> sector(g.size(), 0);
  for (int y = 1; y < h - 1; ++y) {
    for (int x = 1; x < w - 1; ++x) {
      const double gx = (g[idx(x + 1, y - 1)] + 2 * g[idx(x + 1, y)] + g[idx(x + 1, y + 1)]) -
                        (g[idx(x - 1, y - 1)] + 2 * g[idx(x - 1, y)] + g[idx(x - 1, y + 1)]);
      const double gy = (g[idx(x - 1, y + 1)] + 2 * g[idx(x, y + 1)] + g[idx(x + 1, y + 1)]) -
                        (g[idx(x - 1, y - 1)] + 2 * g[idx(x, y - 1)] + g[idx(x + 1, y - 1)]);
      mag[idx(x, y)] = std::hypot(gx, gy);
      // Gradient direction quantized to 0/45/90/135 degrees.
      double angle = std::atan2(gy, gx) * 180.0 / std::numbers::pi;
      if (angle < 0) angle += 180.0;
      std::uint8_t s = 0;
      if (angle >= 22.5 && angle < 67.5) s = 1;
      else if (angle >= 67.5 && angle < 112.5) s = 2;
      else if (angle >= 112.5 && angle < 157.5) s = 3;
      sector[idx(x, y)] = s;
    }
  }

  // Non-maximum suppression. The strict/non-strict pair keeps exactly one
  // pixel of a plateau of two equal maxima.
  static constexpr int kDx[4] = {1, 1, 0, -1};
  static constexpr int kDy[4] = {0, 1, 1, 1};
  std::vector<double> thin(g.size(), 0.0);
  for (int y = 1; y < h - 1; ++y) {
    for (int x = 1; x < w - 1; ++x) {
      const double m = mag[idx(x, y)];
      if (m <= 0.0) continue;
      const int s = sector[idx(x, y)];
      const double before = mag[idx(x - kDx[s], y - kDy[s])];
      const double after = mag[idx(x + kDx[s], y + kDy[s])];
      if (m >= before && m > after) thin[idx(x, y)] = m;
    }
  }

  // Hysteresis: weak pixels survive when 8-connected to a strong one.
  EdgeMap out{w, h, std::vector<std::uint8_t>(g.size(), 0)};
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < thin.size(); ++i) {
    if (thin[i] >= cfg.canny_high) {
      out.on[i] = 1;
      stack.push_back(i);
    }
  }
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    const int x = static_cast<int>(i % w), y = static_cast<int>(i / w);
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int nx = x + dx, ny = y + dy;
        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
        const std::size_t j = idx(nx, ny);
        if (!out.on[j] && thin[j] >= cfg.canny_low) {
          out.on[j] = 1;
          stack.push_back(j);
        }
      }
    }
  }
  return out;
}

}  // namespace facells::vectorizer
