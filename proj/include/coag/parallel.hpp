#pragma once

#include <cstddef>
#include <functional>

namespace coag {

// worker count: COAG_THREADS when set (clamped to >= 1), else the hardware
// concurrency. Read once per call site; cheap enough.
unsigned worker_count();

// run fn(begin, end) over a static block partition of [0, n). Each block must
// write only its own slots; block boundaries depend only on n and the worker
// count, and every slot is computed by exactly one sequential loop, so thread
// scheduling can never change the resulting bytes.
void parallel_blocks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

} // namespace coag
