#pragma once

#include <cstddef>
#include <functional>

namespace flowgate {

// Worker count: FLOWGATE_THREADS if set and positive, otherwise hardware concurrency.
std::size_t thread_budget();

// Runs body(begin, end) over contiguous blocks of [0, n). Blocks are disjoint,
// so writes indexed by position are race-free and results do not depend on
// the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace flowgate
