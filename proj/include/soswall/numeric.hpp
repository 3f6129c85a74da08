#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace soswall {

// Kahan compensated accumulator. Enumeration sums can reach 1e8 terms of
// wildly different magnitudes; plain summation drifts past the 1e-10
// tolerances the identity checks demand.
class KahanSum {
 public:
  void add(double x) {
    double y = x - comp_;
    double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  // Merge another accumulator. Combining order must be fixed by the caller
  // so results do not depend on the degree of parallelism.
  void merge(const KahanSum& other) {
    add(other.sum_);
    add(-other.comp_);
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Runs fn(chunk_index, begin, end) over [0, total) split into fixed-size
// chunks. Chunk boundaries depend only on chunk_size, never on n_threads,
// so per-chunk results can be combined in chunk order for bit-identical
// output at any thread count.
template <class Fn>
void for_each_chunk(std::uint64_t total, std::uint64_t chunk_size,
                    int n_threads, Fn&& fn) {
  if (total == 0) return;
  if (chunk_size == 0) chunk_size = total;
  const std::uint64_t n_chunks = (total + chunk_size - 1) / chunk_size;
  if (n_threads <= 1 || n_chunks == 1) {
    for (std::uint64_t c = 0; c < n_chunks; ++c) {
      std::uint64_t lo = c * chunk_size;
      std::uint64_t hi = lo + chunk_size < total ? lo + chunk_size : total;
      fn(c, lo, hi);
    }
    return;
  }
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::uint64_t c = next.fetch_add(1, std::memory_order_relaxed);
      if (c >= n_chunks) break;
      std::uint64_t lo = c * chunk_size;
      std::uint64_t hi = lo + chunk_size < total ? lo + chunk_size : total;
      fn(c, lo, hi);
    }
  };
  std::vector<std::thread> pool;
  int workers = n_threads;
  if (static_cast<std::uint64_t>(workers) > n_chunks)
    workers = static_cast<int>(n_chunks);
  pool.reserve(static_cast<std::size_t>(workers));
  for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace soswall
