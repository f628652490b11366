#pragma once

#include <cstddef>
#include <functional>

namespace coarselab {

// Number of worker threads used by library-level loops. Defaults to the
// hardware concurrency; set once at startup (the CLI's --threads flag).
void set_thread_count(std::size_t n);
std::size_t thread_count();

// Runs body(i) for i in [0, n), splitting the range into contiguous chunks.
// body must only write to state owned by index i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace coarselab
