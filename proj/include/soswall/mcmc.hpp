#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "soswall/conditional.hpp"
#include "soswall/lattice.hpp"
#include "soswall/rng.hpp"

namespace soswall {

// Default height cap: comfortably above the typical height, with enough
// headroom that cap hits are astronomically rare at beta >= 1.
inline int default_cap(const Parameters& p) {
  return static_cast<int>(
             std::ceil(std::log(static_cast<double>(p.side)) / (2.0 * p.beta))) +
         8;
}

// One heat-bath chain: field, parameters, cap, and a seeded counter stream.
// Identical (seed, params, side, cap, sweep schedule) reproduce identical
// trajectories bit for bit at any thread count.
struct ChainState {
  Parameters params;
  int cap;
  std::uint64_t seed;
  Field field;
  CounterRng rng;
  std::shared_ptr<const ConditionalTable> table;
  std::uint64_t sweep_count = 0;
  std::uint64_t update_count = 0;
  std::uint64_t cap_hit_count = 0;

  ChainState(const Parameters& p, int cap_, std::uint64_t seed_, Field init)
      : params(p),
        cap(cap_),
        seed(seed_),
        field(std::move(init)),
        rng(seed_),
        table(std::make_shared<const ConditionalTable>(p.beta, p.h, cap_)) {
    validate();
  }

  ChainState(const Parameters& p, int cap_, std::uint64_t seed_)
      : ChainState(p, cap_, seed_, Field(p.side, 0)) {}

  // Replica constructor: shares the conditional table, fresh seed/field.
  ChainState(const ChainState& proto, std::uint64_t seed_, Field init)
      : params(proto.params),
        cap(proto.cap),
        seed(seed_),
        field(std::move(init)),
        rng(seed_),
        table(proto.table) {
    validate();
  }

 private:
  void validate() const {
    if (field.side() != params.side)
      throw std::invalid_argument("field side does not match parameters");
    if (cap < 0) throw std::invalid_argument("cap must be >= 0");
    for (int r = 1; r <= field.side(); ++r)
      for (int c = 1; c <= field.side(); ++c)
        if (field(r, c) < 0 || field(r, c) > cap)
          throw std::invalid_argument("initial heights must lie in [0, cap]");
  }
};

namespace detail {

// Updates every site of one checkerboard color. Same-color sites only read
// other-color neighbors, so row stripes can run concurrently; each site's
// uniform is addressed by (sweep, site), never by execution order.
template <class PerSite>
void half_sweep(Field& field, int color, int n_threads, PerSite&& update_site) {
  const int n = field.side();
  auto run_rows = [&](int row_lo, int row_hi) {
    for (int r = row_lo; r <= row_hi; ++r) {
      const int c0 = 1 + ((r + 1 + color) & 1);
      for (int c = c0; c <= n; c += 2) update_site(r, c);
    }
  };
  if (n_threads <= 1 || n < 2 * n_threads) {
    run_rows(1, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(n_threads));
  const int rows_per = (n + n_threads - 1) / n_threads;
  for (int t = 0; t < n_threads; ++t) {
    const int lo = 1 + t * rows_per;
    const int hi = std::min(n, lo + rows_per - 1);
    if (lo > hi) break;
    pool.emplace_back([&, lo, hi] { run_rows(lo, hi); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

// Full checkerboard sweep: all even-parity sites, then all odd-parity sites,
// each resampled from its exact conditional via inverse CDF.
inline void heat_bath_sweep(ChainState& state, int n_threads = 1) {
  const int n = state.field.side();
  const std::uint64_t sweep_base =
      state.sweep_count * static_cast<std::uint64_t>(n) * n;
  std::vector<std::uint64_t> hits(static_cast<std::size_t>(n) + 1, 0);
  Field& f = state.field;
  const ConditionalTable& table = *state.table;
  for (int color = 0; color < 2; ++color) {
    detail::half_sweep(f, color, n_threads, [&](int r, int c) {
      const std::uint64_t counter =
          sweep_base + static_cast<std::uint64_t>(r - 1) * n + (c - 1);
      const double u = state.rng.uniform(counter);
      const auto draw = table.sample(f(r - 1, c), f(r + 1, c), f(r, c - 1),
                                     f(r, c + 1), u);
      f(r, c) = draw.value;
      hits[static_cast<std::size_t>(r)] += draw.cap_hit;
    });
  }
  for (std::uint64_t h : hits) state.cap_hit_count += h;
  state.update_count += static_cast<std::uint64_t>(n) * n;
  ++state.sweep_count;
}

// Ordering failure inside a coupled update; carries the offending site and
// both conditionals' inputs.
class ordering_violation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two chains at pinning strengths h_low <= h_high driven by one shared
// uniform stream. The chain with the stronger pinning stays pointwise below
// the weaker one; that ordering is asserted after every site update.
struct CoupledPair {
  ChainState low_h;   // pinning h1; the pointwise-higher surface
  ChainState high_h;  // pinning h2 >= h1; the pointwise-lower surface
  CounterRng shared_rng;
  std::uint64_t violation_count = 0;

  CoupledPair(const Parameters& base, double h1, double h2, int cap,
              std::uint64_t seed)
      : low_h(base.with_h(h1), cap, seed),
        high_h(base.with_h(h2), cap, seed),
        shared_rng(seed) {
    if (h2 < h1) throw std::invalid_argument("requires h1 <= h2");
  }
};

inline void coupled_sweep(CoupledPair& pair, int n_threads = 1) {
  const int n = pair.low_h.field.side();
  const std::uint64_t sweep_base =
      pair.low_h.sweep_count * static_cast<std::uint64_t>(n) * n;
  Field& lo = pair.low_h.field;
  Field& hi = pair.high_h.field;
  const ConditionalTable& table_lo = *pair.low_h.table;
  const ConditionalTable& table_hi = *pair.high_h.table;
  std::vector<std::uint64_t> hits_lo(static_cast<std::size_t>(n) + 1, 0);
  std::vector<std::uint64_t> hits_hi(static_cast<std::size_t>(n) + 1, 0);
  // Violations are recorded, never thrown, inside worker threads; the first
  // one aborts the sweep afterwards.
  std::atomic<std::uint64_t> violations{0};
  std::mutex detail_mutex;
  std::string violation_detail;
  for (int color = 0; color < 2; ++color) {
    detail::half_sweep(lo, color, n_threads, [&](int r, int c) {
      const std::uint64_t counter =
          sweep_base + static_cast<std::uint64_t>(r - 1) * n + (c - 1);
      const double u = pair.shared_rng.uniform(counter);
      const auto draw_lo =
          table_lo.sample(lo(r - 1, c), lo(r + 1, c), lo(r, c - 1), lo(r, c + 1), u);
      const auto draw_hi =
          table_hi.sample(hi(r - 1, c), hi(r + 1, c), hi(r, c - 1), hi(r, c + 1), u);
      if (draw_hi.value > draw_lo.value) {
        violations.fetch_add(1, std::memory_order_relaxed);
        std::scoped_lock lock(detail_mutex);
        if (violation_detail.empty()) {
          std::ostringstream msg;
          msg << "coupled ordering violated at site (" << r << "," << c
              << "): value " << draw_hi.value << " at h="
              << pair.high_h.params.h << " exceeds " << draw_lo.value
              << " at h=" << pair.low_h.params.h << "; neighbors low=("
              << lo(r - 1, c) << "," << lo(r + 1, c) << "," << lo(r, c - 1)
              << "," << lo(r, c + 1) << ") high=(" << hi(r - 1, c) << ","
              << hi(r + 1, c) << "," << hi(r, c - 1) << "," << hi(r, c + 1)
              << ")";
          violation_detail = msg.str();
        }
      }
      lo(r, c) = draw_lo.value;
      hi(r, c) = draw_hi.value;
      hits_lo[static_cast<std::size_t>(r)] += draw_lo.cap_hit;
      hits_hi[static_cast<std::size_t>(r)] += draw_hi.cap_hit;
    });
  }
  for (std::uint64_t h : hits_lo) pair.low_h.cap_hit_count += h;
  for (std::uint64_t h : hits_hi) pair.high_h.cap_hit_count += h;
  for (ChainState* chain : {&pair.low_h, &pair.high_h}) {
    chain->update_count += static_cast<std::uint64_t>(n) * n;
    ++chain->sweep_count;
  }
  if (violations.load() > 0) {
    pair.violation_count += violations.load();
    throw ordering_violation(violation_detail);
  }
}

// Metadata describing a finished (or empty) sampling run.
struct RunMetadata {
  std::uint64_t sweeps = 0;
  std::uint64_t burn_in = 0;
  std::uint64_t thinning = 1;
  std::uint64_t seed = 0;
  std::uint64_t kept = 0;
  std::uint64_t update_count = 0;
  std::uint64_t cap_hit_count = 0;
  double cap_hit_fraction = 0.0;
  bool cap_warning = false;
  std::string initial_condition = "zero";
};

inline constexpr double kCapHitWarnThreshold = 1e-6;

// Runs the chain and hands every kept snapshot to the hook:
// hook(sweep_index, field). Samples are kept after burn_in at the given
// thinning stride.
template <class Hook>
RunMetadata run_chain(ChainState& chain, std::uint64_t sweeps,
                      std::uint64_t burn_in, std::uint64_t thinning,
                      Hook&& hook, int n_threads = 1,
                      std::string initial_condition = "zero") {
  if (thinning == 0) throw std::invalid_argument("thinning must be >= 1");
  if (sweeps < burn_in)
    throw std::invalid_argument("sweeps must be >= burn_in");
  RunMetadata meta;
  meta.sweeps = sweeps;
  meta.burn_in = burn_in;
  meta.thinning = thinning;
  meta.seed = chain.seed;
  meta.initial_condition = std::move(initial_condition);
  const std::uint64_t updates_before = chain.update_count;
  const std::uint64_t hits_before = chain.cap_hit_count;
  for (std::uint64_t s = 1; s <= sweeps; ++s) {
    heat_bath_sweep(chain, n_threads);
    if (s > burn_in && (s - burn_in) % thinning == 0) {
      hook(s, static_cast<const Field&>(chain.field));
      ++meta.kept;
    }
  }
  meta.update_count = chain.update_count - updates_before;
  meta.cap_hit_count = chain.cap_hit_count - hits_before;
  meta.cap_hit_fraction =
      meta.update_count == 0
          ? 0.0
          : static_cast<double>(meta.cap_hit_count) /
                static_cast<double>(meta.update_count);
  meta.cap_warning = meta.cap_hit_fraction > kCapHitWarnThreshold;
  return meta;
}

}  // namespace soswall
