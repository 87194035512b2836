#pragma once

#include <cstddef>
#include <functional>

namespace subfbm {

// Runs fn(chunk_index, begin, end) over [0, count) split into fixed-size
// chunks. The chunk layout depends only on (count, chunk_size), never on the
// worker count, so any writer that touches only its own chunk produces
// bit-identical output at any parallelism degree. Exceptions from workers are
// rethrown on the calling thread (first one wins).
void parallel_for_chunks(std::size_t count, std::size_t chunk_size, int workers,
                         const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

// Sensible default worker count: hardware concurrency, at least 1.
int default_workers();

}  // namespace subfbm
