#pragma once

#include <cstddef>
#include <functional>

namespace thermoset {

/// Worker count used by the library's parallel loops. Defaults to the
/// hardware concurrency. Results never depend on this value.
std::size_t thread_count() noexcept;
void set_thread_count(std::size_t n) noexcept;

/// Runs body(i) for i in [0, n), split into contiguous blocks across the
/// configured workers. The first exception thrown by any block is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace thermoset
