#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <welldist/distribution.hpp>

#include "oracles.hpp"

using namespace welldist;

TEST_SUITE("distribution") {

TEST_CASE("interval counts over closed intervals") {
  const PointSet ps({0.1, 0.5, 0.9});
  CHECK(interval_count(ps, 0.0, 1.0) == 3);
  CHECK(interval_count(ps, 0.4, 0.6) == 1);
  CHECK(interval_count(ps, 0.5, 0.9) == 2); // endpoints included
  CHECK(interval_count(PointSet({}), 0.2, 0.8) == 0);
  CHECK_THROWS_AS(interval_count(ps, 0.6, 0.4), contract_violation);
  CHECK_THROWS_AS(interval_count(ps, 0.5, 0.5), contract_violation);
}

TEST_CASE("point sets validate their range") {
  CHECK_THROWS_AS(PointSet({0.5, 1.0}), contract_violation);
  CHECK_THROWS_AS(PointSet({-0.1}), contract_violation);
}

TEST_CASE("star discrepancy closed forms") {
  CHECK(star_discrepancy(PointSet({0.5})).d_star == 0.5);

  // centered lattice for N = 4: the minimizer, D* = 1/8
  CHECK(star_discrepancy(PointSet({0.125, 0.375, 0.625, 0.875})).d_star == 0.125);

  // a constant cluster near 1 is maximally biased
  const PointSet clustered(std::vector<double>(10, 0.99));
  CHECK(star_discrepancy(clustered).d_star >= 0.99);

  // N = 1: max(x, 1 - x)
  for (double x : {0.25, 0.5, 0.8}) {
    CHECK(star_discrepancy(PointSet({x})).d_star == doctest::Approx(std::max(x, 1.0 - x)));
  }

  CHECK_THROWS_AS(star_discrepancy(PointSet({})), contract_violation);
}

TEST_CASE("formula equals the quadratic search on random sets") {
  std::mt19937_64 rng(424242);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::uniform_int_distribution<int> sizes(1, 200);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> pts(sizes(rng));
    for (double& x : pts) x = uni(rng);
    const double fast = star_discrepancy(PointSet(pts)).d_star;
    const double brute = oracle::brute_star_discrepancy(pts);
    CHECK(std::abs(fast - brute) <= 2.0 * std::ldexp(1.0, -52));
  }
}

TEST_CASE("order of insertion is irrelevant") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<double> pts(64);
  for (double& x : pts) x = uni(rng);
  const double before = star_discrepancy(PointSet(pts)).d_star;
  std::shuffle(pts.begin(), pts.end(), rng);
  CHECK(star_discrepancy(PointSet(pts)).d_star == before);
}

TEST_CASE("classical bounds hold") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> pts(1 + rng() % 300);
    for (double& x : pts) x = uni(rng);
    const double d = star_discrepancy(PointSet(pts)).d_star;
    CHECK(d >= 1.0 / (2.0 * static_cast<double>(pts.size())) - 1e-15);
    CHECK(d <= 1.0);
  }
}

TEST_CASE("windows contrast clustered and spread phases") {
  ConstructionParams p = ConstructionParams::relaxed_default(1, {3'200'000, std::nullopt});
  p.preset_modulus_exponent = 4;
  const ConstructionState st = build(p);
  REQUIRE(st.complete);
  const PrimeTable t = sieve(200'000);
  PrimeAccess access(t, st);

  std::vector<std::pair<std::uint64_t, std::uint64_t>> windows{{0, 10'000}};
  for (const StageRecord& s : st.stages) windows.push_back({s.m, s.r});
  const auto reports = window_profile(st.alpha, 1, access, windows);
  REQUIRE(reports.size() == windows.size());

  // unshifted: spread across the residue atoms; shifted: a single cluster
  CHECK(reports[0].d_star < 0.2);
  for (std::size_t i = 1; i < reports.size(); ++i) {
    CHECK(reports[i].N == st.stages[i - 1].r);
    CHECK(reports[i].d_star >= 0.45);
  }
}

} // TEST_SUITE
