#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace unidisc {

/// Worker count used by parallel_for. Defaults to UNIDISC_THREADS or 1.
int thread_count();
void set_thread_count(int threads);

/// Calls body(i) for every i in [0, count); indices are claimed dynamically.
/// Callers write into per-index slots, so results are independent of the
/// worker count. The first exception thrown by any body is rethrown. Nested
/// calls from inside a body run serially.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// SplitMix64 finalizer, used to derive independent RNG streams.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                       std::uint64_t c = 0);

}  // namespace unidisc
