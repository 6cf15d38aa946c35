#pragma once

#include <cstddef>
#include <functional>

namespace mollify_lab {

/// Worker count: MOLLIFY_LAB_THREADS if set and positive, else the hardware
/// concurrency.
std::size_t thread_count();

/// Runs body(i) for i in [begin, end) over contiguous chunks. Each index is
/// visited exactly once, so per-index results do not depend on scheduling.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& body);

}  // namespace mollify_lab
