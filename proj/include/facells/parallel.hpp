// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>

namespace facells {

/// Process-wide worker count used by parallel_for. Defaults to the number of
/// hardware threads; the CLI overrides it from --threads.
std::size_t worker_count();
void set_worker_count(std::size_t n);

/// Runs body(i) for i in [0, n). Work items are independent; the caller is
/// responsible for writing results to per-index slots so that the outcome
/// does not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace facells
