// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace facells::train_eval {

struct SplitSpec {
  double train = 0.3;
  double test = 0.15;

  /// Throws UsageError unless both fractions are in [0, 1] and sum to <= 1.
  void validate() const;
};

struct Split {
  std::vector<std::string> train;
  std::vector<std::string> test;
};

/// Shuffles the ids with `seed` and takes floor(train * n) ids for training
/// and the next floor(test * n) for testing. The rest is discarded.
Split split(const std::vector<std::string>& ids, const SplitSpec& spec, std::uint64_t seed);

}  // namespace facells::train_eval
