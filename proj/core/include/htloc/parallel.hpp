#pragma once

#include <cstddef>
#include <functional>

namespace htloc {

// Worker count: HTLOC_THREADS if set to a positive integer, otherwise
// std::thread::hardware_concurrency().
[[nodiscard]] std::size_t thread_count();

// Calls body(block) for block in [0, blocks) on up to thread_count() threads;
// a call made from inside a body runs inline. Blocks are claimed dynamically,
// so callers that need schedule-independent results must write per-block
// outputs and reduce them in block order.
void parallel_for_blocks(std::size_t blocks, const std::function<void(std::size_t)>& body);

}  // namespace htloc
