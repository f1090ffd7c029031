// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "facells/path_order/path_order.hpp"

namespace facells::path_order {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Orientation o of stroke s: o = 0 enters at the first point and exits at the
// last, o = 1 the other way round.
class Endpoints {
 public:
  explicit Endpoints(const sketch::Drawing& d) : n_(d.strokes().size()), dist_(4 * n_ * n_) {
    const auto& st = d.strokes();
    for (std::size_t a = 0; a < n_; ++a) {
      for (int oa = 0; oa < 2; ++oa) {
        const sketch::Point exit = oa ? st[a].front() : st[a].back();
        for (std::size_t b = 0; b < n_; ++b) {
          for (int ob = 0; ob < 2; ++ob) {
            const sketch::Point entry = ob ? st[b].back() : st[b].front();
            dist_[index(a, oa, b, ob)] = sketch::distance(exit, entry);
          }
        }
      }
    }
  }
  /// Travel from stroke a (orientation oa) to stroke b (orientation ob).
  double operator()(std::size_t a, int oa, std::size_t b, int ob) const {
    return dist_[index(a, oa, b, ob)];
  }

 private:
  std::size_t index(std::size_t a, int oa, std::size_t b, int ob) const {
    return ((a * 2 + oa) * n_ + b) * 2 + ob;
  }
  std::size_t n_;
  std::vector<double> dist_;
};

// Best cost along a fixed order when some flips are pinned (-1 = free).
double constrained_cost(const Endpoints& dist, const std::vector<std::size_t>& order,
                        const std::vector<int>& pinned) {
  std::array<double, 2> best{0.0, 0.0};
  for (int o = 0; o < 2; ++o) {
    if (pinned[order[0]] >= 0 && pinned[order[0]] != o) best[o] = kInf;
  }
  for (std::size_t k = 1; k < order.size(); ++k) {
    const std::size_t a = order[k - 1], b = order[k];
    std::array<double, 2> next{kInf, kInf};
    for (int ob = 0; ob < 2; ++ob) {
      if (pinned[b] >= 0 && pinned[b] != ob) continue;
      for (int oa = 0; oa < 2; ++oa) next[ob] = std::min(next[ob], best[oa] + dist(a, oa, b, ob));
    }
    best = next;
  }
  return std::min(best[0], best[1]);
}

}  // namespace

Tour solve_exact(const sketch::Drawing& d, std::size_t max_strokes) {
  const std::size_t n = d.strokes().size();
  if (n > max_strokes || n > kExactMaxStrokes) {
    throw InstanceTooLarge("exact ordering supports at most " +
                           std::to_string(std::min(max_strokes, kExactMaxStrokes)) +
                           " strokes, got " + std::to_string(n) + "; use solve_heuristic");
  }
  if (n <= 1) return Tour::identity(n);

  const Endpoints dist(d);
  const std::size_t full = (std::size_t{1} << n) - 1;
  // rest[mask][s][o]: cheapest completion after visiting `mask`, currently
  // at stroke s (in mask) exited with orientation o.
  std::vector<double> rest((full + 1) * n * 2, kInf);
  auto at = [&](std::size_t mask, std::size_t s, int o) -> double& {
    return rest[(mask * n + s) * 2 + o];
  };
  for (std::size_t s = 0; s < n; ++s) at(full, s, 0) = at(full, s, 1) = 0.0;
  for (std::size_t mask = full; mask-- > 1;) {
    for (std::size_t s = 0; s < n; ++s) {
      if (!(mask & (std::size_t{1} << s))) continue;
      for (int o = 0; o < 2; ++o) {
        double best = kInf;
        for (std::size_t t = 0; t < n; ++t) {
          if (mask & (std::size_t{1} << t)) continue;
          const std::size_t next = mask | (std::size_t{1} << t);
          for (int ot = 0; ot < 2; ++ot) best = std::min(best, dist(s, o, t, ot) + at(next, t, ot));
        }
        at(mask, s, o) = best;
      }
    }
  }
  double opt = kInf;
  for (std::size_t s = 0; s < n; ++s) {
    for (int o = 0; o < 2; ++o) opt = std::min(opt, at(std::size_t{1} << s, s, o));
  }
  const double tol = 1e-9 * std::max(1.0, opt);

  // Lexicographically smallest order: extend the prefix with the smallest
  // stroke that still admits an optimal completion. prefix[o] is the
  // cheapest prefix cost ending at the last stroke with orientation o.
  Tour tour;
  std::size_t mask = 0;
  std::array<double, 2> prefix{0.0, 0.0};
  for (std::size_t pos = 0; pos < n; ++pos) {
    for (std::size_t t = 0; t < n; ++t) {
      if (mask & (std::size_t{1} << t)) continue;
      const std::size_t next = mask | (std::size_t{1} << t);
      std::array<double, 2> cand{kInf, kInf};
      double total = kInf;
      for (int ot = 0; ot < 2; ++ot) {
        if (pos == 0) {
          cand[ot] = 0.0;
        } else {
          const std::size_t last = tour.order.back();
          for (int o = 0; o < 2; ++o) {
            cand[ot] = std::min(cand[ot], prefix[o] + dist(last, o, t, ot));
          }
        }
        total = std::min(total, cand[ot] + at(next, t, ot));
      }
      if (total <= opt + tol) {
        tour.order.push_back(t);
        mask = next;
        prefix = cand;
        break;
      }
    }
  }

  // With the order fixed, pick flips stroke by stroke, preferring "as drawn".
  std::vector<int> pinned(n, -1);
  for (std::size_t s = 0; s < n; ++s) {
    pinned[s] = 0;
    if (constrained_cost(dist, tour.order, pinned) > opt + tol) pinned[s] = 1;
  }
  tour.flipped.resize(n);
  for (std::size_t s = 0; s < n; ++s) tour.flipped[s] = pinned[s] == 1;
  tour.pen_up_cost = tour_cost(d, tour);
  return tour;
}

}  // namespace facells::path_order
