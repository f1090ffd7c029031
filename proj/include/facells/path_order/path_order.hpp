// SPDX-License-Identifier: Apache-2.0
#pragma once

// Stroke ordering for minimum pen-up travel.
//
// A tour visits every stroke once, each either as drawn or reversed. Its cost
// is the pen-up travel from each stroke's exit point to the next stroke's
// entry point. The path is open: no depot and no return, and the pen starts
// at the first stroke's entry point. Ink length is the same for every tour
// and is left out.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "facells/error.hpp"
#include "facells/sketch/drawing.hpp"

namespace facells::path_order {

struct Tour {
  /// Stroke indices in drawing order; a permutation of 0..n-1.
  std::vector<std::size_t> order;
  /// Indexed by stroke (not by tour position): traverse stroke k reversed.
  std::vector<bool> flipped;
  double pen_up_cost = 0.0;

  static Tour identity(std::size_t n);
};

enum class OrderMethod { min_length, random, identity };

/// Throws UsageError for anything other than min|random|identity.
OrderMethod parse_order_method(const std::string& s);
std::string order_method_name(OrderMethod m);

class InstanceTooLarge : public UsageError {
 public:
  using UsageError::UsageError;
};

inline constexpr std::size_t kExactMaxStrokes = 10;

/// Sum of exit->entry distances along the tour. Throws DataError when the
/// tour is not a permutation of the drawing's strokes.
double tour_cost(const sketch::Drawing& d, const Tour& t);

/// Global optimum over all n! * 2^n open tours by dynamic programming over
/// stroke subsets. Among optimal tours (costs equal within 1e-9 relative)
/// returns the lexicographically smallest (order, flipped). Throws
/// InstanceTooLarge when n > max_strokes.
Tour solve_exact(const sketch::Drawing& d, std::size_t max_strokes = kExactMaxStrokes);

struct HeuristicStats {
  std::size_t improving_moves = 0;
  std::size_t passes = 0;
};

/// Nearest-neighbor construction over stroke endpoints, started from the
/// endpoint closest to the canvas top-left, then first-improvement local
/// search (segment reversal, which includes single-stroke flips, plus
/// relocation of runs of up to 3 strokes) until a full pass finds no gain or
/// 50*n moves were applied. Candidate moves come from the 16 nearest
/// endpoints of each endpoint. `seed` drives randomized segment-exchange
/// perturbations followed by another descent, clamp(3000/n, 10, 200)
/// rounds. The identity order is improved the same way when it starts out
/// cheaper, so the result never costs more than the identity order.
Tour solve_heuristic(const sketch::Drawing& d, std::uint64_t seed,
                     HeuristicStats* stats = nullptr);

/// Applies the tour: permutes strokes and reverses flipped ones.
sketch::Drawing apply_tour(const sketch::Drawing& d, const Tour& t);

/// min_length uses solve_exact for up to `exact_max` strokes and
/// solve_heuristic beyond; random is a seeded shuffle without flips.
sketch::Drawing reorder(const sketch::Drawing& d, OrderMethod m, std::uint64_t seed,
                        std::size_t exact_max = kExactMaxStrokes);

}  // namespace facells::path_order
