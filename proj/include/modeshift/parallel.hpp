#ifndef MODESHIFT_PARALLEL_HPP
#define MODESHIFT_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace modeshift {

/// Run fn over [0,n) split into contiguous chunks across up to `threads`
/// workers. Callers write into preallocated per-index slots and reduce in
/// fixed order afterwards, so results do not depend on the thread count.
void run_chunked(std::size_t n, int threads, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace modeshift

#endif
