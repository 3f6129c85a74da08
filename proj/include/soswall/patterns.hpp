#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "soswall/lattice.hpp"

namespace soswall {

// One of the four covering patterns: a domino, a triomino (straight or
// bent), a T of four sites, and a plus of five sites. Vertices live in Z^2;
// internal_edges index into vertices.
struct PatternGraph {
  int id = 0;
  std::vector<std::array<int, 2>> vertices;
  std::vector<std::pair<int, int>> internal_edges;
};

inline PatternGraph make_pattern(int id) {
  switch (id) {
    case 1:
      return {1, {{0, 0}, {1, 0}}, {{0, 1}}};
    case 2:
      return {2, {{0, 0}, {1, 0}, {2, 0}}, {{0, 1}, {1, 2}}};
    case 3:
      return {3, {{0, 0}, {1, 0}, {2, 0}, {1, -1}}, {{0, 1}, {1, 2}, {1, 3}}};
    case 4:
      return {4,
              {{0, 0}, {0, 1}, {0, -1}, {1, 0}, {-1, 0}},
              {{0, 1}, {0, 2}, {0, 3}, {0, 4}}};
    default:
      throw std::invalid_argument("pattern id must be in 1..4");
  }
}

// The bent variant of pattern 2; same vertex count and the same eight
// boundary edges as the straight one.
inline PatternGraph make_pattern2_bent() {
  return {2, {{0, 0}, {1, 0}, {1, 1}}, {{0, 1}, {1, 2}}};
}

// |N(B)|: edges of Z^2 with exactly one endpoint in the subset encoded by
// subset_mask.
inline int edge_boundary_size(const PatternGraph& p, std::uint32_t subset_mask) {
  std::set<std::array<int, 2>> members;
  for (std::size_t i = 0; i < p.vertices.size(); ++i)
    if (subset_mask >> i & 1u) members.insert(p.vertices[i]);
  int count = 0;
  static constexpr int kStep[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  for (const auto& v : members)
    for (const auto& d : kStep)
      if (!members.contains({v[0] + d[0], v[1] + d[1]})) ++count;
  return count;
}

// |q2+(B)|: subset members adjacent to another member through an internal
// pattern edge.
inline int paired_member_count(const PatternGraph& p, std::uint32_t subset_mask) {
  std::uint32_t paired = 0;
  for (const auto& [a, b] : p.internal_edges)
    if ((subset_mask >> a & 1u) && (subset_mask >> b & 1u))
      paired |= (1u << a) | (1u << b);
  return std::popcount(paired);
}

// Subset sum of the small-pattern lemma, valid only at h = h_w(beta):
//   e^{-h|V|} sum_{B subset V} e^{-beta |N(B)| + h |q2+(B)|}.
inline double pattern_lhs(const PatternGraph& p, const Parameters& params) {
  const double hw = critical_h(params.beta);
  if (std::abs(params.h - hw) > 1e-12 * std::max(1.0, hw))
    throw std::invalid_argument("pattern_lhs requires h = critical_h(beta)");
  const std::size_t n = p.vertices.size();
  double total = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    const int boundary = edge_boundary_size(p, mask);
    const int paired = paired_member_count(p, mask);
    total += std::exp(-params.beta * boundary + hw * paired);
  }
  return std::exp(-hw * static_cast<double>(n)) * total;
}

// Closed forms from the two exactly-solved cases.
inline double pattern_closed_form(int id, double beta) {
  const double h = critical_h(beta);
  switch (id) {
    case 1:
      return std::exp(-2.0 * h) *
             (1.0 + 2.0 * std::exp(-4.0 * beta) + std::exp(-6.0 * beta + 2.0 * h));
    case 2:
      return std::exp(-3.0 * h) *
             (1.0 + 3.0 * std::exp(-4.0 * beta) + std::exp(-8.0 * beta) +
              2.0 * std::exp(-6.0 * beta + 2.0 * h) +
              std::exp(-8.0 * beta + 3.0 * h));
    default:
      throw std::invalid_argument("closed form available for patterns 1 and 2 only");
  }
}

// All four patterns satisfy lhs >= 1 + e^{-6 beta} / 2 for beta >= 1.
inline double pattern_lower_bound(double beta) {
  return 1.0 + 0.5 * std::exp(-6.0 * beta);
}

}  // namespace soswall
