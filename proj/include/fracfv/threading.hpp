#pragma once

#include <functional>

namespace fracfv {

/// Runs fn(begin, end) over contiguous chunks of [lo, hi) on `threads` workers.
/// Chunks are disjoint and the partition depends only on (lo, hi, threads), so
/// callers that write disjoint outputs are deterministic for any thread count.
void parallel_for(int lo, int hi, int threads, const std::function<void(int, int)>& fn);

/// Thread count from the FRACFV_THREADS environment variable, else `fallback`.
int default_thread_count(int fallback = 1);

} // namespace fracfv
