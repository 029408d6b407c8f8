#pragma once

#include <functional>

namespace wsod {

// Runs fn(begin, end) over a fixed partition of [0, n) into num_chunks
// contiguous ranges. The partition depends only on (n, num_chunks), never on
// the thread count, so callers that reduce per-chunk results in chunk order
// get bit-identical output on any machine.
void parallel_chunks(int n, int num_chunks, const std::function<void(int begin, int end)>& fn);

}  // namespace wsod
