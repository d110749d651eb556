#pragma once

#include <cstddef>
#include <functional>

namespace co3 {

/// Worker cap from the CO3_THREADS environment variable; 0 or 1 means
/// single-threaded. Unset falls back to 1.
unsigned thread_cap();

/// Runs fn(i) for i in [0, n). With a cap above 1 the indices are distributed
/// over that many threads; every fn(i) writes only to its own slot, so the
/// result is identical to the serial order.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace co3
