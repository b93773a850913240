// Minimal fork-join loop over an index range.  The worker count defaults to
// the hardware concurrency and can be capped with HOPFMCF_THREADS.  Work is
// split into contiguous blocks, so results never depend on the thread count
// as long as iterations are independent.
#pragma once

#include <cstddef>
#include <functional>

namespace hopfmcf {

std::size_t worker_count();

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace hopfmcf
