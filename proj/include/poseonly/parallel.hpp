#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace poseonly {

/// Worker count from POSEONLY_THREADS. 0 selects the deterministic
/// single-task mode and is reported as 0; unset means hardware concurrency.
inline unsigned configured_threads() {
  if (const char* env = std::getenv("POSEONLY_THREADS")) {
    try {
      const long value = std::stol(env);
      return value <= 0 ? 0u : static_cast<unsigned>(value);
    } catch (...) {
      return 0u;
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Splits [0, count) into at most `threads` contiguous chunks and runs
/// body(chunk_index, begin, end) on each. Chunk boundaries depend only on
/// (count, threads), so a per-chunk reduction done in chunk order is
/// reproducible for a fixed thread count. threads <= 1 runs inline.
template <typename Body>
void parallel_chunks(std::size_t count, unsigned threads, Body&& body) {
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(threads, count));
  if (workers <= 1) {
    body(std::size_t{0}, std::size_t{0}, count);
    return;
  }
  const std::size_t step = (count + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * step;
    const std::size_t end = std::min(count, begin + step);
    if (begin >= end) break;
    pool.emplace_back([&body, w, begin, end] { body(w, begin, end); });
  }
  for (auto& t : pool) t.join();
}

inline std::size_t chunk_count(std::size_t count, unsigned threads) {
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(threads, count));
  if (workers <= 1) return 1;
  const std::size_t step = (count + workers - 1) / workers;
  return (count + step - 1) / step;
}

}  // namespace poseonly
