// SPDX-License-Identifier: Apache-2.0
#include "facells/train_eval/split.hpp"

#include <cmath>

#include "facells/error.hpp"
#include "facells/rng.hpp"

namespace facells::train_eval {
namespace {

// 0.57 * 100 evaluates to 56.99999999999999.
std::size_t floor_count(double frac, std::size_t n) {
  return static_cast<std::size_t>(std::floor(frac * static_cast<double>(n) + 1e-7));
}

}  // namespace

void SplitSpec::validate() const {
  if (!(train >= 0.0 && train <= 1.0) || !(test >= 0.0 && test <= 1.0)) {
    throw UsageError("split fractions must lie in [0, 1]");
  }
  if (train + test > 1.0 + 1e-12) throw UsageError("split fractions sum to more than 1");
}

Split split(const std::vector<std::string>& ids, const SplitSpec& spec, std::uint64_t seed) {
  spec.validate();
  std::vector<std::string> shuffled = ids;
  Rng rng(seed);
  shuffle(shuffled, rng);
  const std::size_t n = ids.size();
  const std::size_t n_train = floor_count(spec.train, n);
  const std::size_t n_test = std::min(floor_count(spec.test, n), n - n_train);
  Split s;
  s.train.assign(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.test.assign(shuffled.begin() + static_cast<std::ptrdiff_t>(n_train),
                shuffled.begin() + static_cast<std::ptrdiff_t>(n_train + n_test));
  return s;
}

}  // namespace facells::train_eval
