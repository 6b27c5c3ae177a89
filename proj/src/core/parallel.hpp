#pragma once

#include <functional>

namespace vofd {

// 0 restores the automatic choice (hardware concurrency).
void set_default_threads(int n);
int default_threads();

// Splits [0, count) into contiguous chunks, one per worker, and runs
// fn(begin, end) on each. Chunk boundaries depend only on count and the
// configured thread count, and every result location is written by exactly
// one worker, so output never depends on scheduling.
void parallel_for(int count, const std::function<void(int, int)>& fn);

}  // namespace vofd
