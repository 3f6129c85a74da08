#include "soswall/patterns.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace soswall;

namespace {

Parameters critical_params(double beta) {
  return Parameters(beta, critical_h(beta), 4);
}

}  // namespace

TEST_CASE("pattern shapes match the covering family") {
  REQUIRE(make_pattern(1).vertices.size() == 2);
  REQUIRE(make_pattern(2).vertices.size() == 3);
  REQUIRE(make_pattern(3).vertices.size() == 4);
  REQUIRE(make_pattern(4).vertices.size() == 5);
  REQUIRE(make_pattern(1).internal_edges.size() == 1);
  REQUIRE(make_pattern(2).internal_edges.size() == 2);
  REQUIRE(make_pattern(3).internal_edges.size() == 3);
  REQUIRE(make_pattern(4).internal_edges.size() == 4);
  REQUIRE_THROWS_AS(make_pattern(0), std::invalid_argument);
  REQUIRE_THROWS_AS(make_pattern(5), std::invalid_argument);
}

TEST_CASE("both triomino shapes have 3 vertices and 8 boundary edges") {
  const PatternGraph straight = make_pattern(2);
  const PatternGraph bent = make_pattern2_bent();
  REQUIRE(bent.vertices.size() == 3);
  REQUIRE(edge_boundary_size(straight, 0b111) == 8);
  REQUIRE(edge_boundary_size(bent, 0b111) == 8);
}

TEST_CASE("edge boundary counts for simple subsets") {
  const PatternGraph domino = make_pattern(1);
  REQUIRE(edge_boundary_size(domino, 0b00) == 0);
  REQUIRE(edge_boundary_size(domino, 0b01) == 4);
  REQUIRE(edge_boundary_size(domino, 0b10) == 4);
  REQUIRE(edge_boundary_size(domino, 0b11) == 6);
  const PatternGraph plus = make_pattern(4);
  REQUIRE(edge_boundary_size(plus, 0b11111) == 12);
}

TEST_CASE("paired members require an internal edge inside the subset") {
  const PatternGraph straight = make_pattern(2);
  REQUIRE(paired_member_count(straight, 0b101) == 0);  // the two ends
  REQUIRE(paired_member_count(straight, 0b011) == 2);
  REQUIRE(paired_member_count(straight, 0b111) == 3);
  const PatternGraph tee = make_pattern(3);
  REQUIRE(paired_member_count(tee, 0b1001) == 0);  // end + stem, not adjacent
  REQUIRE(paired_member_count(tee, 0b1010) == 2);  // middle + stem
}

TEST_CASE("subset sum matches the closed forms for patterns 1 and 2") {
  std::mt19937_64 gen(41);
  std::uniform_real_distribution<double> beta_dist(1.0, 4.0);
  for (int t = 0; t < 20; ++t) {
    const double beta = beta_dist(gen);
    const Parameters p = critical_params(beta);
    REQUIRE(pattern_lhs(make_pattern(1), p) ==
            Catch::Approx(pattern_closed_form(1, beta)).epsilon(1e-12));
    REQUIRE(pattern_lhs(make_pattern(2), p) ==
            Catch::Approx(pattern_closed_form(2, beta)).epsilon(1e-12));
  }
}

TEST_CASE("straight and bent triominoes give identical subset sums") {
  for (double beta = 1.0; beta <= 4.0; beta += 0.25) {
    const Parameters p = critical_params(beta);
    REQUIRE(pattern_lhs(make_pattern(2), p) ==
            Catch::Approx(pattern_lhs(make_pattern2_bent(), p)).epsilon(1e-14));
  }
}

TEST_CASE("all four patterns clear the lower bound on a beta grid") {
  for (double beta = 1.0; beta <= 4.0 + 1e-9; beta += 0.05) {
    const Parameters p = critical_params(beta);
    const double bound = pattern_lower_bound(beta);
    for (int id = 1; id <= 4; ++id)
      REQUIRE(pattern_lhs(make_pattern(id), p) >= bound);
    REQUIRE(pattern_lhs(make_pattern2_bent(), p) >= bound);
  }
}

TEST_CASE("pattern_lhs rejects off-critical pinning") {
  REQUIRE_THROWS_AS(pattern_lhs(make_pattern(1), Parameters(1.0, 0.5, 4)),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(pattern_lhs(make_pattern(1), Parameters(1.0, 0.0, 4)),
                    std::invalid_argument);
}

TEST_CASE("closed forms exist only for the exactly-solved patterns") {
  REQUIRE_THROWS_AS(pattern_closed_form(3, 1.0), std::invalid_argument);
  REQUIRE_THROWS_AS(pattern_closed_form(4, 1.0), std::invalid_argument);
}
