#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "soswall/lattice.hpp"
#include "soswall/numeric.hpp"
#include "soswall/rng.hpp"

namespace soswall {

class budget_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exhaustively enumerable truncation of the state space: heights in
// [0, max_height], optionally extended down to -depth for the signed space.
struct CappedSpace {
  int side;
  int max_height;
  int depth;

  static constexpr double kDefaultBudget = 1e8;

  CappedSpace(int side_, int max_height_, int depth_ = 0,
              double state_budget = kDefaultBudget)
      : side(side_), max_height(max_height_), depth(depth_) {
    if (side < 1) throw std::invalid_argument("side must be >= 1");
    if (max_height < 0) throw std::invalid_argument("max_height must be >= 0");
    if (depth < 0) throw std::invalid_argument("depth must be >= 0");
    const double states = state_count();
    if (!(states <= state_budget))
      throw budget_error("enumeration budget exceeded: " +
                         std::to_string(states) + " states");
  }

  int sites() const { return side * side; }
  int values_per_site() const { return max_height + depth + 1; }
  double state_count() const {
    return std::pow(static_cast<double>(values_per_site()),
                    static_cast<double>(sites()));
  }
  // Fits in 64 bits whenever construction succeeded.
  std::uint64_t states() const {
    std::uint64_t n = 1;
    for (int i = 0; i < sites(); ++i)
      n *= static_cast<std::uint64_t>(values_per_site());
    return n;
  }
};

namespace detail {

// Row-major site order; digit i is the height of site i, offset by -depth.
template <class Grid>
void decode_state(const CappedSpace& s, std::uint64_t index, Grid& g) {
  const int base = s.values_per_site();
  for (int r = 1; r <= s.side; ++r)
    for (int c = 1; c <= s.side; ++c) {
      g(r, c) = static_cast<std::int32_t>(index % base) - s.depth;
      index /= base;
    }
}

template <class Grid>
bool advance_state(const CappedSpace& s, Grid& g) {
  for (int r = 1; r <= s.side; ++r)
    for (int c = 1; c <= s.side; ++c) {
      if (g(r, c) < s.max_height) {
        ++g(r, c);
        return true;
      }
      g(r, c) = -s.depth;
    }
  return false;
}

inline std::uint64_t omega_index(const CappedSpace& s, const Field& f) {
  const std::uint64_t base = static_cast<std::uint64_t>(s.max_height) + 1;
  std::uint64_t idx = 0;
  std::uint64_t scale = 1;
  for (int r = 1; r <= s.side; ++r)
    for (int c = 1; c <= s.side; ++c) {
      idx += scale * static_cast<std::uint64_t>(f(r, c));
      scale *= base;
    }
  return idx;
}

inline std::string grid_key(const detail::PaddedGrid& g) {
  std::string key;
  key.reserve(static_cast<std::size_t>(g.side()) * g.side() * 4);
  for (int r = 1; r <= g.side(); ++r)
    for (int c = 1; c <= g.side(); ++c) {
      const std::uint32_t v = static_cast<std::uint32_t>(g(r, c));
      for (int b = 0; b < 4; ++b)
        key.push_back(static_cast<char>((v >> (8 * b)) & 0xffu));
    }
  return key;
}

}  // namespace detail

// Visits every field with heights in [0, max_height]. Requires depth == 0.
template <class Visit>
void for_each_field(const CappedSpace& s, Visit&& visit) {
  if (s.depth != 0)
    throw std::invalid_argument("nonzero depth: use for_each_signed_field");
  Field f(s.side, 0);
  do {
    visit(static_cast<const Field&>(f));
  } while (detail::advance_state(s, f.grid()));
}

// Visits every valid signed field with heights in [-depth, max_height]
// satisfying the isolation constraint.
template <class Visit>
void for_each_signed_field(const CappedSpace& s, Visit&& visit) {
  SignedField f(s.side, -s.depth);
  do {
    if (f.isolation_ok()) visit(static_cast<const SignedField&>(f));
  } while (detail::advance_state(s, f.grid()));
}

namespace detail {

// Sum of term(phi) * weight(phi) and of weight(phi) over the capped space,
// with per-chunk compensated sums merged in chunk order: results are
// independent of the thread count.
template <class Term>
void weighted_reduce(const CappedSpace& s, const Parameters& p, Term&& term,
                     double& numerator, double& denominator, int n_threads) {
  if (s.depth != 0)
    throw std::invalid_argument("weighted_reduce runs on the nonnegative space");
  const std::uint64_t total = s.states();
  const std::uint64_t chunk = 1u << 14;
  const std::uint64_t n_chunks = (total + chunk - 1) / chunk;
  std::vector<KahanSum> nums(n_chunks), dens(n_chunks);
  for_each_chunk(total, chunk, n_threads,
                 [&](std::uint64_t ci, std::uint64_t lo, std::uint64_t hi) {
                   Field f(s.side);
                   detail::decode_state(s, lo, f.grid());
                   KahanSum num, den;
                   for (std::uint64_t i = lo; i < hi; ++i) {
                     const double w = std::exp(log_weight(f, p));
                     den.add(w);
                     num.add(w * term(static_cast<const Field&>(f)));
                     if (i + 1 < hi) detail::advance_state(s, f.grid());
                   }
                   nums[ci] = num;
                   dens[ci] = den;
                 });
  KahanSum num, den;
  for (std::uint64_t ci = 0; ci < n_chunks; ++ci) {
    num.merge(nums[ci]);
    den.merge(dens[ci]);
  }
  numerator = num.value();
  denominator = den.value();
}

}  // namespace detail

inline double enumerate_partition_function(const CappedSpace& s,
                                           const Parameters& p,
                                           int n_threads = 1) {
  double num = 0.0, den = 0.0;
  detail::weighted_reduce(
      s, p, [](const Field&) { return 1.0; }, num, den, n_threads);
  return den;
}

template <class Pred>
double exact_event_probability(const CappedSpace& s, const Parameters& p,
                               Pred&& pred, int n_threads = 1) {
  double num = 0.0, den = 0.0;
  detail::weighted_reduce(
      s, p, [&](const Field& f) { return pred(f) ? 1.0 : 0.0; }, num, den,
      n_threads);
  return num / den;
}

template <class Func>
double exact_expectation(const CappedSpace& s, const Parameters& p,
                         Func&& func, int n_threads = 1) {
  double num = 0.0, den = 0.0;
  detail::weighted_reduce(s, p, func, num, den, n_threads);
  return num / den;
}

// log of the partition-function upper bound
//   Z <= e^{h N^2} ((1 + e^{-2 beta}) / (1 - e^{-2 beta}))^{N^2}.
inline double log_partition_upper_bound(const Parameters& p) {
  const double per_site = std::log((1.0 + std::exp(-2.0 * p.beta)) /
                                   (1.0 - std::exp(-2.0 * p.beta)));
  const double sites = static_cast<double>(p.side) * p.side;
  return sites * (p.h + per_site);
}

// The single-spike resummation: summing the four-neighbor interaction of one
// site over all nonpositive heights collapses to a closed form,
//   sum_{k <= 0} e^{-beta sum_i |x_i - k|} = e^{h_w - beta sum_i x_i}.
// lhs is evaluated the long way (explicit terms down to -max(x), then the
// geometric tail), rhs from the closed form.
struct SpikeIdentity {
  double lhs;
  double rhs;
  double relative_error() const { return std::abs(lhs - rhs) / rhs; }
};

inline SpikeIdentity verify_spike_identity(const std::array<int, 4>& x,
                                           double beta) {
  for (int v : x)
    if (v < 0) throw std::invalid_argument("spike heights must be nonnegative");
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  int x_max = 0;
  std::int64_t x_sum = 0;
  for (int v : x) {
    x_max = std::max(x_max, v);
    x_sum += v;
  }
  KahanSum finite;
  for (int k = -x_max; k <= 0; ++k) {
    std::int64_t dist = 0;
    for (int v : x) dist += std::abs(static_cast<std::int64_t>(v) - k);
    finite.add(std::exp(-beta * static_cast<double>(dist)));
  }
  const double r = std::exp(-4.0 * beta);
  const double deepest =
      std::exp(-beta * static_cast<double>(x_sum + 4ll * x_max));
  const double tail = deepest * r / (1.0 - r);
  const double lhs = finite.value() + tail;
  const double rhs = std::exp(critical_h(beta) - beta * static_cast<double>(x_sum));
  return {lhs, rhs};
}

// Unnormalized log-weight of the transformed measure on the signed space:
// energy plus reward on non-isolated zeros only.
inline double signed_log_weight(const SignedField& f, const Parameters& p) {
  return -p.beta * static_cast<double>(hamiltonian(f)) +
         p.h * static_cast<double>(paired_zero_count(f));
}

// Compares P_N^{beta,h_w} on the capped nonnegative space against the
// positive-part marginal of the transformed signed measure truncated at
// the given depth. Returns the maximum absolute probability discrepancy;
// it shrinks by a factor e^{-4 beta} per unit of extra depth.
inline double verify_marginalization(int side, int max_height, int depth,
                                     double beta,
                                     double budget = CappedSpace::kDefaultBudget) {
  const Parameters params(beta, critical_h(beta), side);
  const CappedSpace omega(side, max_height, 0, budget);
  const CappedSpace signed_space(side, max_height, depth, budget);

  std::vector<double> weight(omega.states(), 0.0);
  KahanSum z;
  for_each_field(omega, [&](const Field& f) {
    const double w = std::exp(log_weight(f, params));
    weight[detail::omega_index(omega, f)] = w;
    z.add(w);
  });

  std::vector<double> marginal(omega.states(), 0.0);
  KahanSum z_signed;
  for_each_signed_field(signed_space, [&](const SignedField& f) {
    const double w = std::exp(signed_log_weight(f, params));
    marginal[detail::omega_index(omega, f.positive_part())] += w;
    z_signed.add(w);
  });

  double max_discrepancy = 0.0;
  for (std::uint64_t i = 0; i < omega.states(); ++i) {
    const double d =
        std::abs(weight[i] / z.value() - marginal[i] / z_signed.value());
    max_discrepancy = std::max(max_discrepancy, d);
  }
  return max_discrepancy;
}

// Randomized check of the energy and contact-count comparisons satisfied by
// the two lifting maps.
struct LiftingCheckReport {
  std::int64_t cases_checked = 0;
  std::int64_t violations = 0;
};

inline LiftingCheckReport verify_lifting_inequalities(
    const std::vector<int>& sides, int cases_per_side, std::uint64_t seed) {
  LiftingCheckReport report;
  CounterRng rng(seed);
  for (int n : sides) {
    for (int t = 0; t < cases_per_side; ++t) {
      const int cap = 1 + static_cast<int>(rng.next_bits() % 4);
      Field f(n);
      int max_h = 0;
      for (int r = 1; r <= n; ++r)
        for (int c = 1; c <= n; ++c) {
          f(r, c) = static_cast<int>(rng.next_bits() % (cap + 1));
          max_h = std::max(max_h, static_cast<int>(f(r, c)));
        }
      const std::int64_t energy = hamiltonian(f);
      const std::int64_t zeros = zero_count(f);

      // Grounding map: random subset of the zero set.
      std::vector<Site> ground;
      for (int r = 1; r <= n; ++r)
        for (int c = 1; c <= n; ++c)
          if (f(r, c) == 0 && (rng.next_bits() & 1u)) ground.push_back({r, c});
      const Field lifted = lift_and_ground(f, ground);
      ++report.cases_checked;
      const bool energy_ok =
          hamiltonian(lifted) <=
          energy + 4 * static_cast<std::int64_t>(ground.size()) + 4ll * n;
      const bool zeros_ok =
          zeros - zero_count(lifted) ==
          zeros - static_cast<std::int64_t>(ground.size());
      if (!energy_ok || !zeros_ok) ++report.violations;

      // Contact-preserving map: random subset of a random positive level.
      const int level = 1 + static_cast<int>(rng.next_bits() %
                                             static_cast<std::uint64_t>(
                                                 std::max(1, max_h)));
      std::vector<Site> drop;
      for (int r = 1; r <= n; ++r)
        for (int c = 1; c <= n; ++c)
          if (f(r, c) == level && (rng.next_bits() & 1u)) drop.push_back({r, c});
      const Field lifted2 = lift_keep_contacts(f, level, drop);
      ++report.cases_checked;
      const bool energy2_ok =
          hamiltonian(lifted2) <=
          energy + 4ll * n + 4 * zeros +
              4ll * level * static_cast<std::int64_t>(drop.size());
      const bool zeros2_ok = zero_count(lifted2) == zeros;
      if (!energy2_ok || !zeros2_ok) ++report.violations;
    }
  }
  return report;
}

// Injectivity of the lifting maps over an enumerated space: distinct
// (state, subset) pairs must produce distinct images.
struct InjectivityReport {
  std::uint64_t images = 0;
  std::uint64_t collisions = 0;
  std::uint64_t recovery_failures = 0;
};

inline InjectivityReport verify_zero_lift_injectivity(const CappedSpace& s) {
  InjectivityReport report;
  std::unordered_set<std::string> seen;
  for_each_field(s, [&](const Field& f) {
    std::vector<Site> zeros;
    for (int r = 1; r <= s.side; ++r)
      for (int c = 1; c <= s.side; ++c)
        if (f(r, c) == 0) zeros.push_back({r, c});
    const std::uint32_t subsets = 1u << zeros.size();
    for (std::uint32_t mask = 0; mask < subsets; ++mask) {
      std::vector<Site> ground;
      for (std::size_t i = 0; i < zeros.size(); ++i)
        if (mask >> i & 1u) ground.push_back(zeros[i]);
      const Field image = lift_and_ground(f, ground);
      ++report.images;
      if (!seen.insert(detail::grid_key(image.grid())).second)
        ++report.collisions;
    }
  });
  return report;
}

inline InjectivityReport verify_level_lift_injectivity(const CappedSpace& s,
                                                       int level) {
  InjectivityReport report;
  std::unordered_set<std::string> seen;
  for_each_field(s, [&](const Field& f) {
    std::vector<Site> at_level;
    for (int r = 1; r <= s.side; ++r)
      for (int c = 1; c <= s.side; ++c)
        if (f(r, c) == level) at_level.push_back({r, c});
    const std::uint32_t subsets = 1u << at_level.size();
    for (std::uint32_t mask = 0; mask < subsets; ++mask) {
      std::vector<Site> drop;
      for (std::size_t i = 0; i < at_level.size(); ++i)
        if (mask >> i & 1u) drop.push_back(at_level[i]);
      const Field image = lift_keep_contacts(f, level, drop);
      ++report.images;
      if (!seen.insert(detail::grid_key(image.grid())).second)
        ++report.collisions;
    }
  });
  return report;
}

// Signed-space grounding map restricted to subsets of the non-isolated
// zeros; also confirms the subset can be read back off the image.
inline InjectivityReport verify_signed_lift_injectivity(const CappedSpace& s) {
  InjectivityReport report;
  std::unordered_set<std::string> seen;
  for_each_signed_field(s, [&](const SignedField& f) {
    std::vector<Site> paired;
    for (int r = 1; r <= s.side; ++r)
      for (int c = 1; c <= s.side; ++c) {
        if (f(r, c) != 0) continue;
        const bool zero_neighbor =
            (r > 1 && f(r - 1, c) == 0) || (r < s.side && f(r + 1, c) == 0) ||
            (c > 1 && f(r, c - 1) == 0) || (c < s.side && f(r, c + 1) == 0);
        if (zero_neighbor) paired.push_back({r, c});
      }
    const std::uint32_t subsets = 1u << paired.size();
    for (std::uint32_t mask = 0; mask < subsets; ++mask) {
      std::vector<Site> ground;
      for (std::size_t i = 0; i < paired.size(); ++i)
        if (mask >> i & 1u) ground.push_back(paired[i]);
      const SignedField image = lift_and_ground(f, ground);
      ++report.images;
      if (!seen.insert(detail::grid_key(image.grid())).second)
        ++report.collisions;
      // Recover the grounded set: zero sites with a neighbor at 0 or 1.
      std::vector<Site> recovered;
      for (int r = 1; r <= s.side; ++r)
        for (int c = 1; c <= s.side; ++c) {
          if (image(r, c) != 0) continue;
          const bool low_neighbor =
              (r > 1 && image(r - 1, c) >= 0 && image(r - 1, c) <= 1) ||
              (r < s.side && image(r + 1, c) >= 0 && image(r + 1, c) <= 1) ||
              (c > 1 && image(r, c - 1) >= 0 && image(r, c - 1) <= 1) ||
              (c < s.side && image(r, c + 1) >= 0 && image(r, c + 1) <= 1);
          if (low_neighbor) recovered.push_back({r, c});
        }
      if (recovered != ground) ++report.recovery_failures;
    }
  });
  return report;
}

}  // namespace soswall
