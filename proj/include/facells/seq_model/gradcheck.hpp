// SPDX-License-Identifier: Apache-2.0
#pragma once

// Central finite-difference check of the analytic BPTT gradient.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "facells/rng.hpp"
#include "facells/seq_model/config.hpp"
#include "facells/seq_model/network.hpp"

namespace facells::seq_model {

struct GradCheckOptions {
  std::size_t batches = 20;
  std::size_t batch_size = 4;
  std::size_t min_len = 2;
  std::size_t max_len = 7;
  double step = 1e-5;
  /// Denominator floor: error = |a - n| / max(|a|, |n|, floor).
  double floor = 1e-4;
  std::uint64_t seed = 42;
  /// A draw whose ReLU pre-activations come closer than this to zero is
  /// redrawn: the loss has a kink there and central differences straddling
  /// it do not estimate the derivative.
  double relu_margin = 1e-3;
};

struct GradCheckResult {
  std::string config;
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;
  std::string worst_block;
  std::size_t checked = 0;
  std::size_t redraws = 0;  ///< draws rejected for a ReLU kink within relu_margin
  double seconds = 0.0;
};

double relative_error(double analytic, double numeric, double floor);

/// Random sequences obeying the pen-state grammar, coordinates in [-1, 1],
/// random binary targets.
SequenceBatch random_batch(Rng& rng, std::size_t size, std::size_t min_len, std::size_t max_len,
                           std::size_t outputs);

/// For each batch: fresh random parameters (init plus a small perturbation
/// of every entry, so biases are away from their initial values), then every
/// parameter is compared against (L(w+h) - L(w-h)) / 2h.
GradCheckResult gradient_check(const ModelConfig& cfg, const GradCheckOptions& opt);

/// The five checked architectures at reduced width: 1bi-fs-d1, 1bi-ga-d1,
/// 1bi-ga-d40, 3bi-ga-d1, 3bi-ga-d40 with `cells` cells per direction.
std::vector<ModelConfig> gradcheck_configs(std::size_t cells);

}  // namespace facells::seq_model
