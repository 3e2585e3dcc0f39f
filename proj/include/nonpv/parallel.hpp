// Deterministic chunked parallel loops.
#pragma once

#include <cstddef>
#include <functional>

namespace nonpv {

/// Worker threads used by parallel_for; 0 restores the hardware default.
void set_thread_count(unsigned n);
unsigned thread_count();

/**
 * Calls body(begin, end) on consecutive chunks of [0, n) of size grain.
 * Chunk boundaries depend only on n and grain, never on the thread count,
 * so per-chunk results merged in chunk order are schedule independent.
 */
void parallel_for(std::size_t n, std::size_t grain, const std::function<void(std::size_t, std::size_t)>& body);

inline std::size_t chunk_count(std::size_t n, std::size_t grain) { return grain == 0 ? 0 : (n + grain - 1) / grain; }

}  // namespace nonpv
