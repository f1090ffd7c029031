// SPDX-License-Identifier: Apache-2.0
#include "facells/seq_model/loss.hpp"

#include <algorithm>
#include <cmath>

namespace facells::seq_model {

double bce_loss(std::span<const double> probs, std::span<const double> targets) {
  if (probs.size() != targets.size()) throw DataError("bce_loss: size mismatch");
  if (probs.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double p = std::clamp(probs[i], kProbClamp, 1.0 - kProbClamp);
    const double y = targets[i];
    sum += y * std::log(p) + (1.0 - y) * std::log(1.0 - p);
  }
  return -sum / static_cast<double>(probs.size());
}

void bce_logit_gradient(std::span<const double> probs, std::span<const double> targets,
                        double scale, std::span<double> out) {
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double p = probs[i];
    const bool clamped = p <= kProbClamp || p >= 1.0 - kProbClamp;
    out[i] = clamped ? 0.0 : scale * (p - targets[i]);
  }
}

double balanced_accuracy(std::span<const double> probs, std::span<const double> targets) {
  if (probs.size() != targets.size()) throw DataError("balanced_accuracy: size mismatch");
  std::size_t pos = 0, neg = 0, tp = 0, tn = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const bool predicted = probs[i] > 0.5;
    if (targets[i] > 0.5) {
      ++pos;
      tp += predicted;
    } else {
      ++neg;
      tn += !predicted;
    }
  }
  if (pos == 0 || neg == 0) {
    throw UndefinedClass("balanced accuracy is undefined: targets contain only one class");
  }
  return 0.5 * (static_cast<double>(tp) / static_cast<double>(pos) +
                static_cast<double>(tn) / static_cast<double>(neg));
}

}  // namespace facells::seq_model
