#pragma once

#include <cstddef>
#include <functional>

namespace modalctl {

/// Worker cap from MODALCTL_THREADS (>= 1); hardware concurrency otherwise.
unsigned thread_cap();

/// Runs body(i) for i in [0, count) on up to thread_cap() threads. Each index
/// is handled exactly once; callers write results by index, so output does
/// not depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace modalctl
