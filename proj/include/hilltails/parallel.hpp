#pragma once

#include <cstdint>
#include <cstdlib>
#include <random>

#include <omp.h>

namespace hilltails {

// Worker cap: HILLTAILS_THREADS if set and positive, else the OpenMP default.
inline int worker_count() {
  int n = omp_get_max_threads();
  if (const char* env = std::getenv("HILLTAILS_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v > 0 && v < n) n = static_cast<int>(v);
  }
  return n < 1 ? 1 : n;
}

// One generator per (seed, sample index): results do not depend on how the
// indices are split across workers.
inline std::mt19937_64 stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), 0x68696c6cu};
  return std::mt19937_64(seq);
}

} // namespace hilltails
