#pragma once

#include <cstddef>
#include <functional>

namespace narrow {

// Worker count for internal parallel loops; defaults to 1.
void set_thread_count(unsigned n);
unsigned thread_count();

// Runs body(chunk) for chunk in [0, chunks). Chunk boundaries are chosen by
// callers from the problem size only, so any reduction done in chunk order
// is independent of the thread count.
void for_each_chunk(std::size_t chunks, const std::function<void(std::size_t)>& body);

}  // namespace narrow
