#include "soswall/mcmc.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <vector>

#include "soswall/oracle.hpp"

using namespace soswall;

namespace {

// State index for the 2x2 box with heights in {0, 1}.
int state_index(const Field& f) {
  return f(1, 1) + 2 * f(1, 2) + 4 * f(2, 1) + 8 * f(2, 2);
}

Field field_from_index(int idx) {
  Field f(2);
  f(1, 1) = idx & 1;
  f(1, 2) = (idx >> 1) & 1;
  f(2, 1) = (idx >> 2) & 1;
  f(2, 2) = (idx >> 3) & 1;
  return f;
}

// Exact stationary law on the 16-state space.
std::array<double, 16> exact_law(const Parameters& p) {
  std::array<double, 16> pi{};
  double z = 0.0;
  for (int i = 0; i < 16; ++i) {
    pi[static_cast<std::size_t>(i)] = std::exp(log_weight(field_from_index(i), p));
    z += pi[static_cast<std::size_t>(i)];
  }
  for (double& x : pi) x /= z;
  return pi;
}

double total_variation(const std::array<double, 16>& a,
                       const std::array<double, 16>& b) {
  double tv = 0.0;
  for (int i = 0; i < 16; ++i)
    tv += std::abs(a[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(i)]);
  return tv / 2.0;
}

}  // namespace

TEST_CASE("default cap clears the typical height with margin") {
  for (int n : {16, 64, 128, 256})
    for (double beta : {1.0, 1.5, 2.0}) {
      const Parameters p(beta, 0.0, n);
      REQUIRE(default_cap(p) >= typical_heights(p).subcritical + 8);
    }
}

TEST_CASE("identical seeds give identical trajectories") {
  const Parameters p(1.0, 0.01, 8);
  ChainState a(p, 6, 424242);
  ChainState b(p, 6, 424242);
  for (int s = 0; s < 100; ++s) {
    heat_bath_sweep(a);
    heat_bath_sweep(b);
  }
  REQUIRE(a.field == b.field);
  REQUIRE(a.cap_hit_count == b.cap_hit_count);
}

TEST_CASE("thread count does not change the trajectory") {
  const Parameters p(1.0, 0.01, 9);
  ChainState serial(p, 7, 777);
  ChainState threaded(p, 7, 777);
  for (int s = 0; s < 50; ++s) {
    heat_bath_sweep(serial, 1);
    heat_bath_sweep(threaded, 3);
  }
  REQUIRE(serial.field == threaded.field);
  REQUIRE(serial.cap_hit_count == threaded.cap_hit_count);
}

TEST_CASE("single-site chain resamples its exact conditional") {
  const Parameters p(1.0, 0.3, 1);
  const int cap = 6;
  ChainState chain(p, cap, 31337);
  const auto exact = conditional_distribution({0, 0, 0, 0}, p.beta, p.h, cap);
  std::vector<double> hist(static_cast<std::size_t>(cap) + 1, 0.0);
  const int sweeps = 1'000'000;
  for (int s = 0; s < sweeps; ++s) {
    heat_bath_sweep(chain);
    hist[static_cast<std::size_t>(chain.field(1, 1))] += 1.0;
  }
  double tv = 0.0;
  for (std::size_t k = 0; k <= static_cast<std::size_t>(cap); ++k)
    tv += std::abs(hist[k] / sweeps - exact[k]);
  REQUIRE(tv / 2.0 < 0.005);
}

TEST_CASE("half-sweep kernel satisfies detailed balance at 1e-10") {
  // Explicit 16x16 kernel for the even-parity half sweep on the 2x2 box with
  // cap 1: sites (1,1) and (2,2) resample given the odd-parity sites.
  const Parameters p(1.0, critical_h(1.0), 2);
  const int cap = 1;
  const auto pi = exact_law(p);
  std::array<std::array<double, 16>, 16> kernel{};
  for (int from = 0; from < 16; ++from) {
    const Field f = field_from_index(from);
    const auto p11 =
        conditional_distribution({0, f(2, 1), 0, f(1, 2)}, p.beta, p.h, cap);
    const auto p22 =
        conditional_distribution({f(1, 2), 0, f(2, 1), 0}, p.beta, p.h, cap);
    for (int b11 = 0; b11 <= cap; ++b11)
      for (int b22 = 0; b22 <= cap; ++b22) {
        Field g = field_from_index(from);
        g(1, 1) = b11;
        g(2, 2) = b22;
        kernel[static_cast<std::size_t>(from)]
              [static_cast<std::size_t>(state_index(g))] +=
            p11[static_cast<std::size_t>(b11)] * p22[static_cast<std::size_t>(b22)];
      }
  }
  for (int i = 0; i < 16; ++i) {
    double row = 0.0;
    for (int j = 0; j < 16; ++j) row += kernel[i][j];
    REQUIRE(row == Catch::Approx(1.0).margin(1e-12));
  }
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      REQUIRE(std::abs(pi[static_cast<std::size_t>(i)] * kernel[i][j] -
                       pi[static_cast<std::size_t>(j)] * kernel[j][i]) < 1e-10);
}

TEST_CASE("one sweep preserves the exact law") {
  const Parameters p(1.0, 0.0, 2);
  const int cap = 1;
  const auto pi = exact_law(p);
  std::array<double, 16> cum{};
  double run = 0.0;
  for (int i = 0; i < 16; ++i) {
    run += pi[static_cast<std::size_t>(i)];
    cum[static_cast<std::size_t>(i)] = run;
  }
  const ChainState proto(p, cap, 1);
  CounterRng init_rng(555);
  std::array<double, 16> hist{};
  const int replicas = 1'000'000;
  for (int rep = 0; rep < replicas; ++rep) {
    const double u = init_rng.next_uniform();
    int idx = 0;
    while (cum[static_cast<std::size_t>(idx)] <= u) ++idx;
    ChainState chain(proto, static_cast<std::uint64_t>(rep) + 10, field_from_index(idx));
    heat_bath_sweep(chain);
    hist[static_cast<std::size_t>(state_index(chain.field))] += 1.0;
  }
  for (double& x : hist) x /= replicas;
  REQUIRE(total_variation(hist, pi) < 0.01);
}

TEST_CASE("coupled chains with equal pinning stay identical") {
  const Parameters base(1.0, 0.0, 6);
  CoupledPair pair(base, 0.01, 0.01, 5, 2024);
  for (int s = 0; s < 200; ++s) coupled_sweep(pair);
  REQUIRE(pair.low_h.field == pair.high_h.field);
  REQUIRE(pair.violation_count == 0);
}

TEST_CASE("coupled chains preserve the pointwise ordering") {
  const Parameters base(1.0, 0.0, 8);
  CoupledPair pair(base, 0.0, critical_h(1.0), 6, 99);
  for (int s = 0; s < 500; ++s) coupled_sweep(pair);
  REQUIRE(pair.violation_count == 0);
  for (int r = 1; r <= 8; ++r)
    for (int c = 1; c <= 8; ++c)
      REQUIRE(pair.high_h.field(r, c) <= pair.low_h.field(r, c));
}

TEST_CASE("coupled constructor rejects decreasing pinning") {
  const Parameters base(1.0, 0.0, 4);
  REQUIRE_THROWS_AS(CoupledPair(base, 0.5, 0.0, 4, 1), std::invalid_argument);
}

TEST_CASE("run_chain bookkeeping") {
  const Parameters p(1.0, 0.0, 4);
  SECTION("zero kept samples is a valid empty stream") {
    ChainState chain(p, 4, 7);
    int calls = 0;
    const auto meta = run_chain(chain, 5, 5, 1,
                                [&](std::uint64_t, const Field&) { ++calls; });
    REQUIRE(calls == 0);
    REQUIRE(meta.kept == 0);
    REQUIRE(meta.update_count == 5 * 16);
    REQUIRE_FALSE(meta.cap_warning);
  }
  SECTION("kept count respects burn-in and thinning") {
    ChainState chain(p, 4, 7);
    std::vector<std::uint64_t> kept_at;
    const auto meta = run_chain(
        chain, 50, 10, 8,
        [&](std::uint64_t s, const Field&) { kept_at.push_back(s); });
    REQUIRE(meta.kept == 5);
    REQUIRE(kept_at == std::vector<std::uint64_t>{18, 26, 34, 42, 50});
  }
  SECTION("observable stream reproduces under the same seed") {
    std::vector<std::int64_t> a, b;
    for (auto* out : {&a, &b}) {
      ChainState chain(p, 4, 90210);
      run_chain(chain, 200, 20, 3, [&](std::uint64_t, const Field& f) {
        out->push_back(zero_count(f));
      });
    }
    REQUIRE(a == b);
  }
  SECTION("invalid schedules are rejected") {
    ChainState chain(p, 4, 7);
    auto hook = [](std::uint64_t, const Field&) {};
    REQUIRE_THROWS_AS(run_chain(chain, 5, 6, 1, hook), std::invalid_argument);
    REQUIRE_THROWS_AS(run_chain(chain, 5, 1, 0, hook), std::invalid_argument);
  }
}

TEST_CASE("tight caps trigger the cap-hit warning") {
  const Parameters p(0.5, 0.0, 8);
  ChainState chain(p, 1, 11);
  const auto meta =
      run_chain(chain, 500, 0, 10, [](std::uint64_t, const Field&) {});
  REQUIRE(meta.cap_hit_count > 0);
  REQUIRE(meta.cap_hit_fraction > kCapHitWarnThreshold);
  REQUIRE(meta.cap_warning);
}

TEST_CASE("chain state validation") {
  const Parameters p(1.0, 0.0, 3);
  Field bad(3, 0);
  bad(1, 1) = 9;
  REQUIRE_THROWS_AS(ChainState(p, 4, 1, bad), std::invalid_argument);
  REQUIRE_THROWS_AS(ChainState(p, 4, 1, Field(2, 0)), std::invalid_argument);
}
