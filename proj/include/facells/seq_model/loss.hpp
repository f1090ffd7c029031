// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

#include "facells/error.hpp"

namespace facells::seq_model {

/// Probabilities are clamped this far from 0 and 1 before taking logs.
inline constexpr double kProbClamp = 1e-7;

/// Mean binary cross-entropy over all entries.
double bce_loss(std::span<const double> probs, std::span<const double> targets);

/// d(bce_loss)/d(logit) for each entry, given sigmoid outputs. Zero where the
/// clamp is active, matching the clamped loss exactly.
void bce_logit_gradient(std::span<const double> probs, std::span<const double> targets,
                        double scale, std::span<double> out);

class UndefinedClass : public DataError {
 public:
  using DataError::DataError;
};

/// (TPR + TNR) / 2 with predictions thresholded at p > 0.5. Throws
/// UndefinedClass when the targets contain only one class.
double balanced_accuracy(std::span<const double> probs, std::span<const double> targets);

}  // namespace facells::seq_model
