#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "soswall/lattice.hpp"

namespace soswall {

// |phi^{-1}([H + m, inf))| with H the subcritical typical height.
inline std::int64_t upward_excess(const Field& f, const Parameters& p, int m) {
  const int level = typical_heights(p).subcritical + m;
  std::int64_t count = 0;
  for (int r = 1; r <= f.side(); ++r)
    for (int c = 1; c <= f.side(); ++c) count += f(r, c) >= level;
  return count;
}

// |phi^{-1}([0, H - m])|.
inline std::int64_t downward_excess(const Field& f, const Parameters& p, int m) {
  const int level = typical_heights(p).subcritical - m;
  if (level < 0) return 0;
  std::int64_t count = 0;
  for (int r = 1; r <= f.side(); ++r)
    for (int c = 1; c <= f.side(); ++c) count += f(r, c) <= level;
  return count;
}

// Critical variant |phi^{-1}([1, H_w - m])|.
inline std::int64_t critical_downward_excess(const Field& f, const Parameters& p,
                                             int m) {
  const int level = typical_heights(p).critical - m;
  if (level < 1) return 0;
  std::int64_t count = 0;
  for (int r = 1; r <= f.side(); ++r)
    for (int c = 1; c <= f.side(); ++c)
      count += f(r, c) >= 1 && f(r, c) <= level;
  return count;
}

struct ZeroCounts {
  std::int64_t isolated = 0;   // q1
  std::int64_t paired = 0;     // q2+
  std::int64_t total = 0;      // |phi^{-1}(0)|
};

inline ZeroCounts zero_counts(const Field& f) {
  const ZeroClassification cls = classify_zeros(f);
  ZeroCounts out;
  out.isolated = static_cast<std::int64_t>(cls.isolated.size());
  out.paired = static_cast<std::int64_t>(cls.non_isolated.size());
  out.total = out.isolated + out.paired;
  return out;
}

// Most frequent height (ties broken toward the larger height) and the mass
// at the mode and one level below it.
struct ModeSummary {
  int mode = 0;
  double fraction_at_mode = 0.0;
  double fraction_below_mode = 0.0;
};

inline ModeSummary mode_heights(const Field& f) {
  const LevelCensus census = level_census(f);
  ModeSummary out;
  std::int64_t best = -1;
  for (const auto& [height, count] : census.counts)
    if (count >= best) {
      best = count;
      out.mode = height;
    }
  const double sites = static_cast<double>(census.total);
  out.fraction_at_mode = static_cast<double>(census.count_at(out.mode)) / sites;
  out.fraction_below_mode =
      static_cast<double>(census.count_at(out.mode - 1)) / sites;
  return out;
}

// Fraction of sites at the two concentration levels {H-1, H}.
inline double two_level_fraction(const Field& f, const Parameters& p) {
  const int top = typical_heights(p).subcritical;
  std::int64_t count = 0;
  for (int r = 1; r <= f.side(); ++r)
    for (int c = 1; c <= f.side(); ++c)
      count += f(r, c) == top || f(r, c) == top - 1;
  return static_cast<double>(count) /
         (static_cast<double>(f.side()) * f.side());
}

// Indicator events exactly as stated in the height and zero-count theorems;
// strict vs non-strict comparisons follow the statements verbatim.
struct TheoremEvents {
  bool upward_spike = false;         // |phi^{-1}([H+m,inf))| >  e^{-2bm} N^2
  bool downward_spike = false;       // |phi^{-1}([0,H-m])|   > 2e^{-2bm} N^2
  bool paired_zeros_linear = false;  // |q2+|                 >= C N
  bool critical_joint = false;       // zeros <= C N^{4/3}  and
                                     // |phi^{-1}([1,Hw-m])|  >= 2e^{-2bm} N^2
};

inline TheoremEvents theorem_events(const Field& f, const Parameters& p, int m,
                                    double big_c) {
  TheoremEvents ev;
  const double sites = static_cast<double>(p.side) * p.side;
  const double spike_scale = std::exp(-2.0 * p.beta * m) * sites;
  ev.upward_spike = static_cast<double>(upward_excess(f, p, m)) > spike_scale;
  ev.downward_spike =
      static_cast<double>(downward_excess(f, p, m)) > 2.0 * spike_scale;
  const ZeroCounts zc = zero_counts(f);
  ev.paired_zeros_linear =
      static_cast<double>(zc.paired) >= big_c * static_cast<double>(p.side);
  const double n_four_thirds =
      std::pow(static_cast<double>(p.side), 4.0 / 3.0);
  ev.critical_joint =
      static_cast<double>(zc.total) <= big_c * n_four_thirds &&
      static_cast<double>(critical_downward_excess(f, p, m)) >=
          2.0 * spike_scale;
  return ev;
}

// A named sample series with batch-means error bars.
class ObservableSeries {
 public:
  explicit ObservableSeries(std::string name) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }
  void push(double v) { values_.push_back(v); }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  struct BatchSummary {
    double mean = std::numeric_limits<double>::quiet_NaN();
    double stderr_mean = std::numeric_limits<double>::quiet_NaN();
    int batches = 0;
    bool valid = false;
  };

  // Batch means with at least min_batches batches of equal length; the tail
  // remainder is dropped. Error bars are reported only when every batch
  // holds at least two samples.
  BatchSummary batch_means(int min_batches = 20) const {
    BatchSummary out;
    const std::size_t n = values_.size();
    const std::size_t batches = static_cast<std::size_t>(min_batches);
    if (batches == 0 || n < 2 * batches) {
      if (n > 0) {
        double s = 0.0;
        for (double v : values_) s += v;
        out.mean = s / static_cast<double>(n);
      }
      return out;
    }
    const std::size_t len = n / batches;
    const std::size_t used = batches * len;
    double total = 0.0;
    for (std::size_t i = 0; i < used; ++i) total += values_[i];
    const double mean = total / static_cast<double>(used);
    double ss = 0.0;
    for (std::size_t b = 0; b < batches; ++b) {
      double bsum = 0.0;
      for (std::size_t i = b * len; i < (b + 1) * len; ++i) bsum += values_[i];
      const double bmean = bsum / static_cast<double>(len);
      ss += (bmean - mean) * (bmean - mean);
    }
    out.mean = mean;
    out.stderr_mean = std::sqrt(ss / static_cast<double>(batches - 1) /
                                static_cast<double>(batches));
    out.batches = static_cast<int>(batches);
    out.valid = true;
    return out;
  }

 private:
  std::string name_;
  std::vector<double> values_;
};

}  // namespace soswall
