// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <array>
#include <cmath>
#include <optional>

#include "facells/vectorizer/vectorize.hpp"

namespace facells::vectorizer {
namespace {

struct Pixel {
  int x;
  int y;
};

// Ring order around a pixel, clockwise from east. Axis neighbors sit at even
// positions.
constexpr std::array<Pixel, 8> kRing{{{1, 0}, {1, 1}, {0, 1}, {-1, 1},
                                      {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};

class Tracer {
 public:
  explicit Tracer(const EdgeMap& e) : e_(e), used_(e.on.size(), 0) {}

  bool free(int x, int y) const {
    if (x < 0 || y < 0 || x >= e_.width || y >= e_.height) return false;
    const std::size_t i = static_cast<std::size_t>(y) * e_.width + x;
    return e_.on[i] && !used_[i];
  }
  void take(Pixel p) { used_[static_cast<std::size_t>(p.y) * e_.width + p.x] = 1; }

  // Number of 8-connected groups formed by the free ring pixels of p,
  // ignoring pixels that touch `from` (they belong to the way we came in).
  int branch_count(Pixel p, std::optional<Pixel> from) const {
    std::array<bool, 8> in{};
    for (int k = 0; k < 8; ++k) {
      const Pixel q{p.x + kRing[k].x, p.y + kRing[k].y};
      in[k] = free(q.x, q.y);
      if (in[k] && from && std::abs(q.x - from->x) <= 1 && std::abs(q.y - from->y) <= 1) {
        in[k] = false;
      }
    }
    // Walk the ring; consecutive ring entries are always 8-adjacent, and an
    // axis entry also touches the entries two steps away.
    int groups = 0;
    std::array<int, 8> label{};
    label.fill(-1);
    for (int k = 0; k < 8; ++k) {
      if (!in[k] || label[k] >= 0) continue;
      std::array<int, 8> stack{};
      int top = 0;
      stack[top++] = k;
      label[k] = groups;
      while (top) {
        const int c = stack[--top];
        for (int step : {-2, -1, 1, 2}) {
          if ((step == 2 || step == -2) && (c % 2) != 0) continue;
          const int n = (c + step + 8) % 8;
          if ((step == 2 || step == -2) && (n % 2) != 0) continue;
          if (in[n] && label[n] < 0) {
            label[n] = groups;
            stack[top++] = n;
          }
        }
      }
      ++groups;
    }
    return groups;
  }

  // Best free neighbor of p: smallest turn relative to `dir`, then axis
  // neighbors, then ring order.
  std::optional<Pixel> next(Pixel p, std::optional<Pixel> dir) const {
    std::optional<Pixel> best;
    double best_score = -1e9;
    for (int k = 0; k < 8; ++k) {
      const Pixel d = kRing[k];
      if (!free(p.x + d.x, p.y + d.y)) continue;
      double score = 0.0;
      if (dir) {
        score = (d.x * dir->x + d.y * dir->y) /
                (std::hypot(d.x, d.y) * std::hypot(dir->x, dir->y));
      }
      if (k % 2 == 0) score += 1e-6;
      if (score > best_score + 1e-12) {
        best_score = score;
        best = d;
      }
    }
    if (!best) return std::nullopt;
    return Pixel{p.x + best->x, p.y + best->y};
  }

  // Extends `chain` from its back until it runs out of pixels or reaches a
  // junction (which is kept as the final point).
  void grow(std::vector<Pixel>& chain) {
    while (true) {
      const Pixel cur = chain.back();
      std::optional<Pixel> prev;
      std::optional<Pixel> dir;
      if (chain.size() >= 2) {
        prev = chain[chain.size() - 2];
        dir = Pixel{cur.x - prev->x, cur.y - prev->y};
        if (branch_count(cur, prev) >= 2) return;
      }
      const auto n = next(cur, dir);
      if (!n) return;
      take(*n);
      chain.push_back(*n);
    }
  }

  std::vector<Pixel> chain_from(Pixel start) {
    const bool junction = branch_count(start, std::nullopt) >= 3;
    take(start);
    std::vector<Pixel> fwd{start};
    grow(fwd);
    if (junction) return fwd;
    std::vector<Pixel> back{start};
    grow(back);
    std::vector<Pixel> out(back.rbegin(), back.rend());
    out.insert(out.end(), fwd.begin() + 1, fwd.end());
    return out;
  }

 private:
  const EdgeMap& e_;
  std::vector<std::uint8_t> used_;
};

double point_segment_distance(sketch::Point p, sketch::Point a, sketch::Point b) {
  const double vx = b.x - a.x, vy = b.y - a.y;
  const double len2 = vx * vx + vy * vy;
  if (len2 == 0.0) return sketch::distance(p, a);
  const double t = std::clamp(((p.x - a.x) * vx + (p.y - a.y) * vy) / len2, 0.0, 1.0);
  return sketch::distance(p, {a.x + t * vx, a.y + t * vy});
}

void rdp(std::span<const sketch::Point> pts, std::size_t lo, std::size_t hi, double eps,
         std::vector<std::uint8_t>& keep) {
  if (hi <= lo + 1) return;
  double worst = -1.0;
  std::size_t at = lo;
  for (std::size_t i = lo + 1; i < hi; ++i) {
    const double d = point_segment_distance(pts[i], pts[lo], pts[hi]);
    if (d > worst) {
      worst = d;
      at = i;
    }
  }
  if (worst > eps) {
    keep[at] = 1;
    rdp(pts, lo, at, eps, keep);
    rdp(pts, at, hi, eps, keep);
  }
}

}  // namespace

std::vector<sketch::Point> simplify_rdp(std::span<const sketch::Point> pts, double epsilon) {
  if (pts.size() <= 2) return {pts.begin(), pts.end()};
  std::vector<std::uint8_t> keep(pts.size(), 0);
  keep.front() = keep.back() = 1;
  rdp(pts, 0, pts.size() - 1, epsilon, keep);
  std::vector<sketch::Point> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (keep[i]) out.push_back(pts[i]);
  }
  return out;
}

std::vector<std::vector<sketch::Point>> trace_chains(const EdgeMap& edges) {
  Tracer tracer(edges);
  std::vector<std::vector<sketch::Point>> chains;
  for (int y = 0; y < edges.height; ++y) {
    for (int x = 0; x < edges.width; ++x) {
      if (!tracer.free(x, y)) continue;
      std::vector<sketch::Point> chain;
      for (const Pixel& p : tracer.chain_from({x, y})) {
        chain.push_back({static_cast<double>(p.x), static_cast<double>(p.y)});
      }
      chains.push_back(std::move(chain));
    }
  }
  return chains;
}

sketch::Drawing trace_strokes(const EdgeMap& edges, const VectorizeConfig& cfg,
                              const std::string& id) {
  cfg.validate();
  std::vector<sketch::Stroke> strokes;
  for (const auto& chain : trace_chains(edges)) {
    if (chain.size() < static_cast<std::size_t>(cfg.min_stroke_points)) continue;
    strokes.emplace_back(simplify_rdp(chain, cfg.simplify_epsilon));
  }
  return sketch::Drawing(id, edges.width, edges.height, std::move(strokes));
}

sketch::Drawing vectorize(const RasterImage& img, const VectorizeConfig& cfg,
                          const std::string& id) {
  return trace_strokes(canny_edges(img, cfg), cfg, id);
}

}  // namespace facells::vectorizer
