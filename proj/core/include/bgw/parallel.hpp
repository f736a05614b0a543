#pragma once

#include <cstddef>
#include <functional>

namespace bgw {

/// `requested` if positive, else the BGW_THREADS environment variable, else
/// the hardware concurrency (at least 1).
unsigned resolve_threads(unsigned requested = 0);

/// Runs body(i) for i in [0, n) on a pool of `threads` workers. Work items
/// are claimed from a shared counter, so results must be written to
/// per-index slots. The first exception thrown by a worker is rethrown.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace bgw
