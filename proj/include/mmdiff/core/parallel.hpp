#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace mmdiff {

// Runs `body(begin, end, chunk)` over `n_items` split into `n_chunks`
// contiguous ranges.  Chunk boundaries depend only on (n_items, n_chunks),
// never on the thread count, so callers that key all randomness on the chunk
// index (e.g. rng.stream(chunk)) and merge per-chunk results in chunk order
// get bit-identical output on any machine.
inline void parallel_for_chunks(
    std::int64_t n_items, int n_chunks,
    const std::function<void(std::int64_t, std::int64_t, int)>& body) {
  if (n_items <= 0) return;
  if (n_chunks < 1) n_chunks = 1;
  if (n_chunks > n_items) n_chunks = static_cast<int>(n_items);

  auto chunk_begin = [&](int c) { return n_items * c / n_chunks; };

  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  const int n_threads =
      static_cast<int>(hw) < n_chunks ? static_cast<int>(hw) : n_chunks;

  if (n_threads == 1) {
    for (int c = 0; c < n_chunks; ++c)
      body(chunk_begin(c), chunk_begin(c + 1), c);
    return;
  }

  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int c = next.fetch_add(1);
      if (c >= n_chunks) return;
      body(chunk_begin(c), chunk_begin(c + 1), c);
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(n_threads));
  for (int i = 0; i < n_threads; ++i) threads.emplace_back(worker);
  for (std::thread& t : threads) t.join();
}

}  // namespace mmdiff
