#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace soswall {

// Single-site heat-bath conditional for the pinned measure:
//   p(k) ~ exp(-beta sum_i |k - n_i| + h 1{k = 0}),  k in [0, cap].
// The exponent is piecewise linear in k with breakpoints at the sorted
// neighbor heights, so the weights form at most five geometric segments.
// Construction therefore needs a constant number of exp() calls; the fill
// between breakpoints is multiplicative.

namespace detail {

struct ConditionalScratch {
  std::vector<double> weights;  // unnormalized w(k), k in [0, cap]
  double total = 0.0;           // Z_cap
  double keep_mass = 1.0;       // Z_cap / Z_infinity, for cap-hit accounting
};

// Builds the unnormalized weights into scratch. Neighbors may exceed cap.
inline void build_conditional(const std::array<int, 4>& nbrs, double beta,
                              double h, int cap, ConditionalScratch& out) {
  std::array<int, 4> n = nbrs;
  std::sort(n.begin(), n.end());
  if (n[0] < 0) throw std::invalid_argument("neighbor heights must be >= 0");
  if (cap < 0) throw std::invalid_argument("cap must be >= 0");

  // Ratios w(k)/w(k-1) = exp(-beta * (2 cnt - 4)) keyed by
  // cnt = #neighbors <= k-1.
  const std::array<double, 5> ratio = {
      std::exp(4.0 * beta), std::exp(2.0 * beta), 1.0, std::exp(-2.0 * beta),
      std::exp(-4.0 * beta)};

  const double s0 = static_cast<double>(n[0] + n[1] + n[2] + n[3]);
  // Energy-only weights e(k); the pinning factor applies at k = 0 alone.
  double e = std::exp(-beta * s0);

  out.weights.assign(static_cast<std::size_t>(cap) + 1, 0.0);
  out.weights[0] = e * std::exp(h);
  double total = out.weights[0];
  for (int k = 1; k <= cap; ++k) {
    const int cnt = (n[0] <= k - 1) + (n[1] <= k - 1) + (n[2] <= k - 1) +
                    (n[3] <= k - 1);
    e *= ratio[static_cast<std::size_t>(cnt)];
    out.weights[static_cast<std::size_t>(k)] = e;
    total += e;
  }
  out.total = total;

  // Mass the uncapped conditional places above cap: walk the remaining
  // breakpoints, then close the pure-geometric tail.
  double tail = 0.0;
  double e_tail = e;
  int k = cap;
  while (k < n[3]) {
    ++k;
    const int cnt = (n[0] <= k - 1) + (n[1] <= k - 1) + (n[2] <= k - 1) +
                    (n[3] <= k - 1);
    e_tail *= ratio[static_cast<std::size_t>(cnt)];
    tail += e_tail;
  }
  const double r = ratio[4];
  tail += e_tail * r / (1.0 - r);
  out.keep_mass = total / (total + tail);
}

// Normalized CDF with the last entry pinned to exactly one, so inverse-CDF
// scans always terminate for u < 1.
inline void cumulative_from_weights(const ConditionalScratch& scratch,
                                    std::vector<double>& cum) {
  cum.resize(scratch.weights.size());
  const double inv = 1.0 / scratch.total;
  double run = 0.0;
  for (std::size_t k = 0; k + 1 < cum.size(); ++k) {
    run += scratch.weights[k];
    cum[k] = run * inv;
  }
  cum.back() = 1.0;
}

}  // namespace detail

// Normalized probability vector over [0, cap].
inline std::vector<double> conditional_distribution(
    const std::array<int, 4>& nbrs, double beta, double h, int cap) {
  detail::ConditionalScratch scratch;
  detail::build_conditional(nbrs, beta, h, cap, scratch);
  std::vector<double> p = std::move(scratch.weights);
  for (double& x : p) x /= scratch.total;
  return p;
}

// CDF of the conditional plus the capped-mass fraction.
struct ConditionalCdf {
  std::vector<double> cum;
  double keep_mass;
};

inline ConditionalCdf conditional_cdf(const std::array<int, 4>& nbrs,
                                      double beta, double h, int cap) {
  detail::ConditionalScratch scratch;
  detail::build_conditional(nbrs, beta, h, cap, scratch);
  ConditionalCdf out;
  detail::cumulative_from_weights(scratch, out.cum);
  out.keep_mass = scratch.keep_mass;
  return out;
}

// Inverse-CDF draw: the smallest k with cum[k] > u. A shared uniform drives
// the monotone coupling, so this must be the one sampling rule everywhere.
inline int sample_from_cdf(const ConditionalCdf& cdf, double u) {
  int k = 0;
  while (cdf.cum[static_cast<std::size_t>(k)] <= u) ++k;
  return k;
}

// Precomputed conditional CDFs for every neighbor combination at fixed
// (beta, h, cap). Rows hold cum[0..cap] then keep_mass. Falls back to
// on-the-fly construction when the table would be too large; both paths run
// the same arithmetic, so draws are identical either way.
class ConditionalTable {
 public:
  struct Draw {
    int value;
    bool cap_hit;
  };

  ConditionalTable(double beta, double h, int cap)
      : beta_(beta), h_(h), cap_(cap), stride_(cap + 2) {
    if (cap < 0) throw std::invalid_argument("cap must be >= 0");
    const std::uint64_t base = static_cast<std::uint64_t>(cap) + 1;
    const std::uint64_t rows = base * base * base * base;
    if (rows * static_cast<std::uint64_t>(stride_) <= kMaxTableDoubles) {
      rows_.resize(rows * static_cast<std::uint64_t>(stride_));
      detail::ConditionalScratch scratch;
      std::vector<double> cum;
      std::array<int, 4> n{};
      for (std::uint64_t idx = 0; idx < rows; ++idx) {
        std::uint64_t rem = idx;
        for (int i = 0; i < 4; ++i) {
          n[static_cast<std::size_t>(i)] = static_cast<int>(rem % base);
          rem /= base;
        }
        detail::build_conditional(n, beta_, h_, cap_, scratch);
        detail::cumulative_from_weights(scratch, cum);
        double* row = &rows_[idx * static_cast<std::uint64_t>(stride_)];
        for (int k = 0; k <= cap_; ++k)
          row[k] = cum[static_cast<std::size_t>(k)];
        row[cap_ + 1] = scratch.keep_mass;
      }
    }
  }

  double beta() const { return beta_; }
  double h() const { return h_; }
  int cap() const { return cap_; }

  Draw sample(int up, int down, int left, int right, double u) const {
    if (!rows_.empty()) {
      const std::uint64_t base = static_cast<std::uint64_t>(cap_) + 1;
      const std::uint64_t idx =
          static_cast<std::uint64_t>(up) +
          base * (static_cast<std::uint64_t>(down) +
                  base * (static_cast<std::uint64_t>(left) +
                          base * static_cast<std::uint64_t>(right)));
      const double* row = &rows_[idx * static_cast<std::uint64_t>(stride_)];
      int k = 0;
      while (row[k] <= u) ++k;
      return {k, u >= row[cap_ + 1]};
    }
    thread_local detail::ConditionalScratch scratch;
    thread_local std::vector<double> cum;
    detail::build_conditional({up, down, left, right}, beta_, h_, cap_, scratch);
    detail::cumulative_from_weights(scratch, cum);
    int k = 0;
    while (cum[static_cast<std::size_t>(k)] <= u) ++k;
    return {k, u >= scratch.keep_mass};
  }

 private:
  static constexpr std::uint64_t kMaxTableDoubles = 4'000'000;

  double beta_;
  double h_;
  int cap_;
  int stride_;
  std::vector<double> rows_;
};

}  // namespace soswall
