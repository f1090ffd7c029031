// SPDX-License-Identifier: Apache-2.0
#include <numeric>

#include "facells/path_order/path_order.hpp"
#include "facells/rng.hpp"

namespace facells::path_order {

Tour Tour::identity(std::size_t n) {
  Tour t;
  t.order.resize(n);
  std::iota(t.order.begin(), t.order.end(), std::size_t{0});
  t.flipped.assign(n, false);
  return t;
}

OrderMethod parse_order_method(const std::string& s) {
  if (s == "min" || s == "min_length") return OrderMethod::min_length;
  if (s == "random") return OrderMethod::random;
  if (s == "identity") return OrderMethod::identity;
  throw UsageError("unknown ordering method '" + s + "' (expected min, random or identity)");
}

std::string order_method_name(OrderMethod m) {
  switch (m) {
    case OrderMethod::min_length: return "min";
    case OrderMethod::random: return "random";
    case OrderMethod::identity: return "identity";
  }
  return "?";
}

double tour_cost(const sketch::Drawing& d, const Tour& t) {
  const auto& strokes = d.strokes();
  const std::size_t n = strokes.size();
  if (t.order.size() != n || t.flipped.size() != n) {
    throw DataError("tour size does not match the drawing's stroke count");
  }
  std::vector<bool> seen(n, false);
  for (std::size_t s : t.order) {
    if (s >= n || seen[s]) throw DataError("tour order is not a permutation");
    seen[s] = true;
  }
  double cost = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    const std::size_t a = t.order[k - 1], b = t.order[k];
    const sketch::Point exit = t.flipped[a] ? strokes[a].front() : strokes[a].back();
    const sketch::Point entry = t.flipped[b] ? strokes[b].back() : strokes[b].front();
    cost += sketch::distance(exit, entry);
  }
  return cost;
}

sketch::Drawing apply_tour(const sketch::Drawing& d, const Tour& t) {
  tour_cost(d, t);  // validates
  std::vector<sketch::Stroke> out;
  out.reserve(t.order.size());
  for (std::size_t s : t.order) {
    out.push_back(t.flipped[s] ? d.strokes()[s].reversed() : d.strokes()[s]);
  }
  return d.with_strokes(std::move(out));
}

sketch::Drawing reorder(const sketch::Drawing& d, OrderMethod m, std::uint64_t seed,
                        std::size_t exact_max) {
  const std::size_t n = d.strokes().size();
  switch (m) {
    case OrderMethod::identity:
      return d;
    case OrderMethod::random: {
      Tour t = Tour::identity(n);
      Rng rng(seed);
      shuffle(t.order, rng);
      return apply_tour(d, t);
    }
    case OrderMethod::min_length:
      return apply_tour(d, n <= exact_max && n <= kExactMaxStrokes ? solve_exact(d)
                                                                   : solve_heuristic(d, seed));
  }
  return d;
}

}  // namespace facells::path_order
