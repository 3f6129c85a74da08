#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

namespace soswall {

// Model parameters: inverse temperature beta, pinning reward h, lattice
// side N, and the slack delta entering kappa.
struct Parameters {
  double beta;
  double h;
  int side;
  double delta;

  Parameters(double beta_, double h_, int side_, double delta_ = 1.0)
      : beta(beta_), h(h_), side(side_), delta(delta_) {
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
    if (!(h >= 0.0)) throw std::invalid_argument("h must be nonnegative");
    if (side < 1) throw std::invalid_argument("lattice side must be >= 1");
    if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  }

  Parameters with_h(double new_h) const {
    return Parameters(beta, new_h, side, delta);
  }
  Parameters with_side(int new_side) const {
    return Parameters(beta, h, new_side, delta);
  }
};

struct Site {
  int row;
  int col;
  friend auto operator<=>(const Site&, const Site&) = default;
};

namespace detail {

// Padded (N+2)x(N+2) integer grid. The border stays at zero, so neighbor
// reads never branch on the box boundary.
class PaddedGrid {
 public:
  explicit PaddedGrid(int side, int fill = 0)
      : side_(side),
        stride_(side + 2),
        cells_(static_cast<std::size_t>(stride_) * stride_, 0) {
    if (side < 1) throw std::invalid_argument("lattice side must be >= 1");
    for (int r = 1; r <= side_; ++r)
      for (int c = 1; c <= side_; ++c) (*this)(r, c) = fill;
  }

  int side() const { return side_; }

  // 1-based interior access; (0, *) and (side+1, *) are the zero border.
  std::int32_t& operator()(int r, int c) {
    return cells_[static_cast<std::size_t>(r) * stride_ + c];
  }
  std::int32_t operator()(int r, int c) const {
    return cells_[static_cast<std::size_t>(r) * stride_ + c];
  }

  std::int32_t* data() { return cells_.data(); }
  const std::int32_t* data() const { return cells_.data(); }
  int stride() const { return stride_; }

  friend bool operator==(const PaddedGrid&, const PaddedGrid&) = default;

 private:
  int side_;
  int stride_;
  std::vector<std::int32_t> cells_;
};

}  // namespace detail

// Nonnegative height function on the N x N box, zero outside.
class Field {
 public:
  explicit Field(int side, int fill = 0) : grid_(side, fill) {
    if (fill < 0) throw std::invalid_argument("heights must be nonnegative");
  }

  int side() const { return grid_.side(); }
  std::int32_t& operator()(int r, int c) { return grid_(r, c); }
  std::int32_t operator()(int r, int c) const { return grid_(r, c); }

  detail::PaddedGrid& grid() { return grid_; }
  const detail::PaddedGrid& grid() const { return grid_; }

  bool nonnegative() const {
    for (int r = 1; r <= side(); ++r)
      for (int c = 1; c <= side(); ++c)
        if (grid_(r, c) < 0) return false;
    return true;
  }

  friend bool operator==(const Field&, const Field&) = default;

 private:
  detail::PaddedGrid grid_;
};

// Element of the signed state space: negative heights are allowed only at
// sites whose in-box neighbors all sit at height >= 1.
class SignedField {
 public:
  explicit SignedField(int side, int fill = 0) : grid_(side, fill) {}

  int side() const { return grid_.side(); }
  std::int32_t& operator()(int r, int c) { return grid_(r, c); }
  std::int32_t operator()(int r, int c) const { return grid_(r, c); }

  detail::PaddedGrid& grid() { return grid_; }
  const detail::PaddedGrid& grid() const { return grid_; }

  // Isolation constraint defining the space.
  bool isolation_ok() const {
    const int n = side();
    for (int r = 1; r <= n; ++r)
      for (int c = 1; c <= n; ++c) {
        if (grid_(r, c) > -1) continue;
        if ((r > 1 && grid_(r - 1, c) < 1) || (r < n && grid_(r + 1, c) < 1) ||
            (c > 1 && grid_(r, c - 1) < 1) || (c < n && grid_(r, c + 1) < 1))
          return false;
      }
    return true;
  }

  Field positive_part() const {
    Field f(side());
    for (int r = 1; r <= side(); ++r)
      for (int c = 1; c <= side(); ++c)
        f(r, c) = grid_(r, c) > 0 ? grid_(r, c) : 0;
    return f;
  }

  friend bool operator==(const SignedField&, const SignedField&) = default;

 private:
  detail::PaddedGrid grid_;
};

// Per-height site counts. count_range gives |phi^{-1}([lo, hi])|.
struct LevelCensus {
  std::map<int, std::int64_t> counts;
  std::int64_t total = 0;

  std::int64_t count_at(int k) const {
    auto it = counts.find(k);
    return it == counts.end() ? 0 : it->second;
  }
  std::int64_t count_range(int lo, int hi) const {
    std::int64_t s = 0;
    for (auto it = counts.lower_bound(lo); it != counts.end() && it->first <= hi;
         ++it)
      s += it->second;
    return s;
  }
  std::int64_t count_at_least(int k) const {
    std::int64_t s = 0;
    for (auto it = counts.lower_bound(k); it != counts.end(); ++it)
      s += it->second;
    return s;
  }
};

// Zero sites split into isolated ones (every in-box neighbor >= 1) and
// non-isolated ones (some in-box neighbor at zero). Neighbors outside the
// box do not participate in this classification.
struct ZeroClassification {
  std::vector<Site> isolated;
  std::vector<Site> non_isolated;
};

namespace detail {

template <class Grid>
std::int64_t grid_energy(const Grid& g) {
  const int n = g.side();
  std::int64_t e = 0;
  for (int r = 1; r <= n; ++r) {
    for (int c = 1; c <= n; ++c) {
      const std::int64_t v = g(r, c);
      // In-box edges counted once via right/down neighbors.
      if (c < n) e += std::llabs(v - g(r, c + 1));
      if (r < n) e += std::llabs(v - g(r + 1, c));
      // One term per (in-box site, external neighbor) pair; corners have two.
      std::int64_t exposure = 0;
      exposure += (r == 1) + (r == n) + (c == 1) + (c == n);
      e += exposure * std::llabs(v);
    }
  }
  return e;
}

}  // namespace detail

// Gradient energy plus boundary anchoring, an exact integer.
inline std::int64_t hamiltonian(const Field& f) {
  return detail::grid_energy(f.grid());
}
inline std::int64_t hamiltonian(const SignedField& f) {
  return detail::grid_energy(f.grid());
}

inline std::int64_t zero_count(const Field& f) {
  std::int64_t z = 0;
  for (int r = 1; r <= f.side(); ++r)
    for (int c = 1; c <= f.side(); ++c) z += f(r, c) == 0;
  return z;
}

// Log of the unnormalized Gibbs weight: -beta * energy + h * #zeros.
inline double log_weight(const Field& f, const Parameters& p) {
  return -p.beta * static_cast<double>(hamiltonian(f)) +
         p.h * static_cast<double>(zero_count(f));
}

inline LevelCensus level_census(const Field& f) {
  LevelCensus census;
  const int n = f.side();
  for (int r = 1; r <= n; ++r)
    for (int c = 1; c <= n; ++c) ++census.counts[f(r, c)];
  census.total = static_cast<std::int64_t>(n) * n;
  return census;
}

inline ZeroClassification classify_zeros(const Field& f) {
  ZeroClassification out;
  const int n = f.side();
  for (int r = 1; r <= n; ++r) {
    for (int c = 1; c <= n; ++c) {
      if (f(r, c) != 0) continue;
      const bool zero_neighbor =
          (r > 1 && f(r - 1, c) == 0) || (r < n && f(r + 1, c) == 0) ||
          (c > 1 && f(r, c - 1) == 0) || (c < n && f(r, c + 1) == 0);
      if (zero_neighbor)
        out.non_isolated.push_back({r, c});
      else
        out.isolated.push_back({r, c});
    }
  }
  return out;
}

// Zeros of a signed field are exactly the height-0 sites; negative sites do
// not count, and they never sit next to another nonpositive site anyway.
inline std::int64_t paired_zero_count(const SignedField& f) {
  const int n = f.side();
  std::int64_t q = 0;
  for (int r = 1; r <= n; ++r)
    for (int c = 1; c <= n; ++c) {
      if (f(r, c) != 0) continue;
      const bool zero_neighbor =
          (r > 1 && f(r - 1, c) == 0) || (r < n && f(r + 1, c) == 0) ||
          (c > 1 && f(r, c - 1) == 0) || (c < n && f(r, c + 1) == 0);
      q += zero_neighbor;
    }
  return q;
}

// Pinning threshold h_w(beta) = log(e^{4b} / (e^{4b} - 1)), evaluated as
// -log1p(-e^{-4b}) so large beta neither overflows nor cancels.
inline double critical_h(double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  return -std::log1p(-std::exp(-4.0 * beta));
}

// kappa = (4 beta + delta) / log(e^{-h} + e^{-4 beta}), defined for h below
// the pinning threshold. The denominator is log1p of e^{-h} - e^{-h_w},
// which stays accurate as h approaches h_w.
inline double kappa(const Parameters& p) {
  const double hw = critical_h(p.beta);
  if (p.h >= hw)
    throw std::domain_error("kappa requires h < critical_h(beta)");
  const double den = std::log1p(std::exp(-hw) * std::expm1(hw - p.h));
  return (4.0 * p.beta + p.delta) / den;
}

namespace detail {

// floor(log(n) / denom) with an integer-exactness fixup: n is an integer,
// so compare e^{denom * k} against n directly at the boundary.
inline int floor_log_ratio(int n, double denom) {
  int k = static_cast<int>(std::floor(std::log(static_cast<double>(n)) / denom));
  while (k > 0 && std::exp(denom * k) > static_cast<double>(n)) --k;
  while (std::exp(denom * (k + 1)) <= static_cast<double>(n)) ++k;
  return k;
}

}  // namespace detail

// Typical heights: the subcritical concentration height floor(log N / 4b)
// and the conjectured critical height floor(log N / 6b).
struct TypicalHeights {
  int subcritical;
  int critical;
};

inline TypicalHeights typical_heights(const Parameters& p) {
  return {detail::floor_log_ratio(p.side, 4.0 * p.beta),
          detail::floor_log_ratio(p.side, 6.0 * p.beta)};
}

// Lifting map on nonnegative fields: every site outside A rises by one,
// sites in A (a subset of the zeros) are grounded at zero.
inline Field lift_and_ground(const Field& f, const std::vector<Site>& ground) {
  Field out(f.side());
  for (int r = 1; r <= f.side(); ++r)
    for (int c = 1; c <= f.side(); ++c) out(r, c) = f(r, c) + 1;
  for (const Site& s : ground) {
    if (f(s.row, s.col) != 0)
      throw std::invalid_argument("ground set must consist of zero sites");
    out(s.row, s.col) = 0;
  }
  return out;
}

// Signed-space variant: A must be a subset of the non-isolated zeros.
inline SignedField lift_and_ground(const SignedField& f,
                                   const std::vector<Site>& ground) {
  SignedField out(f.side());
  for (int r = 1; r <= f.side(); ++r)
    for (int c = 1; c <= f.side(); ++c) out(r, c) = f(r, c) + 1;
  for (const Site& s : ground) {
    if (f(s.row, s.col) != 0)
      throw std::invalid_argument("ground set must consist of zero sites");
    out(s.row, s.col) = 0;
  }
  return out;
}

// Lifting map that preserves the contact set: zeros stay at zero, sites of A
// (a subset of phi^{-1}(level), level >= 1) drop to one, everything else
// rises by one.
inline Field lift_keep_contacts(const Field& f, int level,
                                const std::vector<Site>& drop) {
  if (level < 1) throw std::invalid_argument("level must be >= 1");
  Field out(f.side());
  for (int r = 1; r <= f.side(); ++r)
    for (int c = 1; c <= f.side(); ++c) {
      const int v = f(r, c);
      out(r, c) = v == 0 ? 0 : v + 1;
    }
  for (const Site& s : drop) {
    if (f(s.row, s.col) != level)
      throw std::invalid_argument("drop set must sit at the given level");
    out(s.row, s.col) = 1;
  }
  return out;
}

}  // namespace soswall
