// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <numeric>

#include "facells/path_order/path_order.hpp"
#include "facells/rng.hpp"
#include "facells/simd/kernels.hpp"

namespace facells::path_order {
namespace {

// Tour positions hold "entry endpoint" ids: stroke s entered at its first
// point is 2s, entered at its last point is 2s+1. The exit endpoint of a node
// is node ^ 1, and reversing a segment reverses it and toggles every node.
using Node = std::uint32_t;

constexpr double kMinGain = 1e-9;
constexpr std::size_t kMaxSegment = 3;
constexpr std::size_t kNeighbors = 16;

class LocalSearch {
 public:
  LocalSearch(std::vector<double> xs, std::vector<double> ys)
      : m_(xs.size()), xs_(std::move(xs)), ys_(std::move(ys)) {
    // The k endpoints nearest to each endpoint, excluding its own stroke.
    const std::size_t k = std::min(kNeighbors, m_ - 2);
    nbr_.resize(m_);
    std::vector<std::pair<double, Node>> cand;
    for (std::size_t a = 0; a < m_; ++a) {
      cand.clear();
      for (std::size_t b = 0; b < m_; ++b) {
        if ((b >> 1) != (a >> 1)) cand.emplace_back(dist(a, b), static_cast<Node>(b));
      }
      std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end());
      for (std::size_t i = 0; i < k; ++i) nbr_[a].push_back(cand[i].second);
    }
  }

  double dist(std::size_t a, std::size_t b) const {
    const double dx = xs_[a] - xs_[b], dy = ys_[a] - ys_[b];
    return std::sqrt(dx * dx + dy * dy);
  }
  // Travel from the exit of node a to the entry of node b.
  double hop(Node a, Node b) const { return dist(a ^ 1u, b); }

  double cost(const std::vector<Node>& t) const {
    double c = 0.0;
    for (std::size_t k = 1; k < t.size(); ++k) c += hop(t[k - 1], t[k]);
    return c;
  }

  // First-improvement descent; returns the number of applied moves.
  std::size_t descend(std::vector<Node>& t, std::size_t move_budget, std::size_t& passes) const {
    std::vector<std::size_t> pos(t.size());
    reindex(t, pos);
    std::size_t moves = 0;
    bool improved = true;
    while (improved && moves < move_budget) {
      improved = false;
      ++passes;
      moves += reversal_pass(t, pos, move_budget - moves, improved);
      if (moves < move_budget) moves += relocation_pass(t, pos, move_budget - moves, improved);
    }
    return moves;
  }

 private:
  static void reindex(const std::vector<Node>& t, std::vector<std::size_t>& pos) {
    for (std::size_t k = 0; k < t.size(); ++k) pos[t[k] >> 1] = k;
  }

  // Segment reversal t[i..j]. A gain needs one of the two new hops to be
  // shorter than the hop it replaces, so candidates come from the neighbor
  // lists of the endpoints on either side.
  std::size_t reversal_pass(std::vector<Node>& t, std::vector<std::size_t>& pos,
                            std::size_t budget, bool& improved) const {
    const std::size_t n = t.size();
    std::size_t moves = 0;
    auto delta = [&](std::size_t i, std::size_t j) {
      double before = 0.0, after = 0.0;
      if (i > 0) {
        before += hop(t[i - 1], t[i]);
        after += hop(t[i - 1], t[j] ^ 1u);
      }
      if (j + 1 < n) {
        before += hop(t[j], t[j + 1]);
        after += hop(t[i] ^ 1u, t[j + 1]);
      }
      return after - before;
    };
    auto apply = [&](std::size_t i, std::size_t j) {
      std::reverse(t.begin() + static_cast<std::ptrdiff_t>(i),
                   t.begin() + static_cast<std::ptrdiff_t>(j) + 1);
      for (std::size_t k = i; k <= j; ++k) {
        t[k] ^= 1u;
        pos[t[k] >> 1] = k;
      }
      ++moves;
      improved = true;
    };
    for (std::size_t g = 0; g < n && moves < budget; ++g) {
      // Left side: hop t[g-1] -> t[g] is replaced, t[g..j] reversed.
      if (g > 0) {
        const Node a = t[g - 1] ^ 1u;
        const double old = dist(a, t[g]);
        for (Node e : nbr_[a]) {
          if (dist(a, e) >= old) break;
          const std::size_t j = pos[e >> 1];
          if ((t[j] ^ 1u) != e || j < g) continue;
          if (delta(g, j) < -kMinGain) {
            apply(g, j);
            break;
          }
        }
      }
      // Right side: hop t[g] -> t[g+1] is replaced, t[i..g] reversed.
      if (g + 1 < n) {
        const Node b = t[g + 1];
        const double old = dist(t[g] ^ 1u, b);
        for (Node e : nbr_[b]) {
          if (dist(e, b) >= old) break;
          const std::size_t i = pos[e >> 1];
          if (t[i] != e || i > g) continue;
          if (delta(i, g) < -kMinGain) {
            apply(i, g);
            break;
          }
        }
      }
    }
    return moves;
  }

  // Moves a run of up to kMaxSegment strokes to another gap, optionally
  // reversed. Target gaps sit next to a neighbor of the run's endpoints.
  std::size_t relocation_pass(std::vector<Node>& t, std::vector<std::size_t>& pos,
                              std::size_t budget, bool& improved) const {
    const std::size_t n = t.size();
    std::size_t moves = 0;
    for (std::size_t len = 1; len <= kMaxSegment && len < n; ++len) {
      for (std::size_t i = 0; i + len <= n && moves < budget; ++i) {
        const std::size_t last = i + len - 1;
        double removed = 0.0;
        if (i > 0) removed += hop(t[i - 1], t[i]);
        if (last + 1 < n) removed += hop(t[last], t[last + 1]);
        if (i > 0 && last + 1 < n) removed -= hop(t[i - 1], t[last + 1]);

        // The remaining sequence R skips t[i..last].
        const std::size_t r = n - len;
        auto rest = [&](std::size_t g) { return g < i ? t[g] : t[g + len]; };
        auto rank = [&](std::size_t p) { return p < i ? p : p - len; };
        double best = -kMinGain;
        std::size_t best_gap = 0;
        bool best_rev = false;
        auto consider = [&](std::size_t g, bool rev) {
          if (g == i && !rev) return;
          const Node first = rev ? t[last] ^ 1u : t[i];
          const Node tail = rev ? t[i] ^ 1u : t[last];
          double added = 0.0;
          if (g > 0) added += hop(rest(g - 1), first);
          if (g < r) added += hop(tail, rest(g));
          if (g > 0 && g < r) added -= hop(rest(g - 1), rest(g));
          const double d = added - removed;
          if (d < best) {
            best = d;
            best_gap = g;
            best_rev = rev;
          }
        };
        consider(0, false);
        consider(0, true);
        consider(r, false);
        consider(r, true);
        for (int rev = 0; rev < 2; ++rev) {
          // Entry endpoint of the run's first node and exit endpoint of its tail.
          const Node entry = rev ? t[last] ^ 1u : t[i];
          const Node exit = rev ? t[i] : t[last] ^ 1u;
          // A hop at least as long as everything removed rarely pays off.
          for (Node e : nbr_[entry]) {
            if (dist(entry, e) >= removed) break;
            const std::size_t p = pos[e >> 1];
            if (p >= i && p <= last) continue;
            if ((t[p] ^ 1u) == e) consider(rank(p) + 1, rev != 0);
          }
          for (Node e : nbr_[exit]) {
            if (dist(exit, e) >= removed) break;
            const std::size_t p = pos[e >> 1];
            if (p >= i && p <= last) continue;
            if (t[p] == e) consider(rank(p), rev != 0);
          }
        }
        if (best < -kMinGain) {
          std::vector<Node> seg(t.begin() + static_cast<std::ptrdiff_t>(i),
                                t.begin() + static_cast<std::ptrdiff_t>(last) + 1);
          if (best_rev) {
            std::reverse(seg.begin(), seg.end());
            for (Node& v : seg) v ^= 1u;
          }
          t.erase(t.begin() + static_cast<std::ptrdiff_t>(i),
                  t.begin() + static_cast<std::ptrdiff_t>(last) + 1);
          t.insert(t.begin() + static_cast<std::ptrdiff_t>(best_gap), seg.begin(), seg.end());
          reindex(t, pos);
          ++moves;
          improved = true;
        }
      }
    }
    return moves;
  }

  std::size_t m_;
  std::vector<double> xs_, ys_;
  std::vector<std::vector<Node>> nbr_;
};

Tour to_tour(const sketch::Drawing& d, const std::vector<Node>& nodes) {
  Tour t;
  t.order.reserve(nodes.size());
  t.flipped.assign(nodes.size(), false);
  for (Node v : nodes) {
    t.order.push_back(v / 2);
    t.flipped[v / 2] = (v & 1u) != 0;
  }
  t.pen_up_cost = tour_cost(d, t);
  return t;
}

// Random segment exchange: A B C D -> A C B D.
void perturb(std::vector<Node>& t, Rng& rng) {
  const std::size_t n = t.size();
  std::size_t cuts[3] = {1 + uniform_index(rng, n - 1), 1 + uniform_index(rng, n - 1),
                         1 + uniform_index(rng, n - 1)};
  std::sort(cuts, cuts + 3);
  if (cuts[0] == cuts[1] || cuts[1] == cuts[2]) return;
  std::rotate(t.begin() + static_cast<std::ptrdiff_t>(cuts[0]),
              t.begin() + static_cast<std::ptrdiff_t>(cuts[1]),
              t.begin() + static_cast<std::ptrdiff_t>(cuts[2]));
}

}  // namespace

Tour solve_heuristic(const sketch::Drawing& d, std::uint64_t seed, HeuristicStats* stats) {
  const auto& strokes = d.strokes();
  const std::size_t n = strokes.size();
  HeuristicStats local;
  HeuristicStats& st = stats ? *stats : local;
  st = {};
  if (n <= 1) return Tour::identity(n);

  std::vector<double> xs(2 * n), ys(2 * n);
  for (std::size_t s = 0; s < n; ++s) {
    xs[2 * s] = strokes[s].front().x;
    ys[2 * s] = strokes[s].front().y;
    xs[2 * s + 1] = strokes[s].back().x;
    ys[2 * s + 1] = strokes[s].back().y;
  }

  // Nearest-neighbor construction. The endpoint picked becomes the entry.
  std::vector<std::uint8_t> live(2 * n, 1);
  std::vector<Node> nodes;
  nodes.reserve(n);
  std::size_t pick = simd::nearest_live(0.0, 0.0, xs, ys, live);
  for (std::size_t k = 0; k < n; ++k) {
    nodes.push_back(static_cast<Node>(pick));
    live[pick & ~std::size_t{1}] = live[pick | 1] = 0;
    if (k + 1 == n) break;
    const std::size_t out = pick ^ 1;
    pick = simd::nearest_live(xs[out], ys[out], xs, ys, live);
  }

  const LocalSearch ls(std::move(xs), std::move(ys));
  const std::size_t budget = 50 * n;
  st.improving_moves += ls.descend(nodes, budget, st.passes);
  double best_cost = ls.cost(nodes);

  Rng rng(seed);
  if (n >= 4) {
    // Small instances get many rounds; large ones rely on the descent.
    const std::size_t rounds = std::clamp<std::size_t>(3000 / n, 10, 200);
    for (std::size_t round = 0; round < rounds; ++round) {
      std::vector<Node> trial = nodes;
      perturb(trial, rng);
      std::size_t passes = 0;
      ls.descend(trial, budget, passes);
      const double c = ls.cost(trial);
      if (c < best_cost - kMinGain) {
        nodes = std::move(trial);
        best_cost = c;
      }
    }
  }

  // Fall back to improving the given order when construction did worse.
  std::vector<Node> ident(n);
  for (std::size_t s = 0; s < n; ++s) ident[s] = static_cast<Node>(2 * s);
  if (ls.cost(ident) < best_cost) {
    st.improving_moves += ls.descend(ident, budget, st.passes);
    if (ls.cost(ident) < best_cost) nodes = std::move(ident);
  }
  return to_tour(d, nodes);
}

}  // namespace facells::path_order
