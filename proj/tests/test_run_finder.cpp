#include <doctest.h>

#include <numeric>
#include <random>

#include <welldist/run_finder.hpp>

#include "oracles.hpp"

using namespace welldist;

TEST_SUITE("run_finder") {

TEST_CASE("first run examples") {
  // first prime congruent 1 mod 2 is p_2 = 3
  const FindResult r1 = find_first_run(1, 2, 1, {100, std::nullopt});
  REQUIRE(r1.found());
  CHECK(r1.run->m == 1);
  CHECK(r1.run->first_prime == 3);
  CHECK(r1.run->last_prime == 3);

  // first pair of consecutive primes congruent 1 mod 4 is {13, 17} = p_6, p_7
  const FindResult r2 = find_first_run(2, 4, 1, {100, std::nullopt});
  REQUIRE(r2.found());
  CHECK(r2.run->m == 5);
  CHECK(r2.run->primes == std::vector<std::uint64_t>{13, 17});

  // twelve consecutive primes congruent 1 mod 4096: nowhere near this budget
  const FindResult r3 = find_first_run(12, 4096, 1, {1'000'000, std::nullopt});
  CHECK(!r3.found());
  CHECK(r3.frontier_prime == 999983);
  CHECK(r3.frontier_index == 78498);
}

TEST_CASE("ones_run_for_length specializes the query") {
  const FindResult r = ones_run_for_length(1, {100, std::nullopt});
  REQUIRE(r.found());
  CHECK(r.run->m == 1);
  CHECK(r.run->q == 2);
  const FindResult r2 = ones_run_for_length(2, {100, std::nullopt});
  REQUIRE(r2.found());
  CHECK(r2.run->m == 5); // {13, 17} again: q = 4
  CHECK_THROWS_AS(ones_run_for_length(63, {100, std::nullopt}), contract_violation);
}

TEST_CASE("query contracts") {
  const SearchBudget b{100, std::nullopt};
  CHECK_THROWS_AS(find_first_run(1, 2, 0, b), contract_violation); // residue 0
  CHECK_THROWS_AS(find_first_run(1, 4, 2, b), contract_violation); // gcd 2
  CHECK_THROWS_AS(find_first_run(0, 4, 1, b), contract_violation); // k = 0
  CHECK_THROWS_AS(find_first_run(1, 1, 0, b), contract_violation); // q < 2
}

TEST_CASE("maximal runs below 100, mod 4 residue 1") {
  std::vector<CongruentRun> got;
  enumerate_runs(2, 4, 1, {100, std::nullopt}, [&](const CongruentRun& r) {
    got.push_back(r);
    return true;
  });
  // hand-checked: {13,17} at m=5, {37,41} at m=11, and {89,97} still open at
  // the budget frontier (101 would extend it)
  REQUIRE(got.size() == 3);
  CHECK(got[0].m == 5);
  CHECK(got[0].k == 2);
  CHECK(got[1].m == 11);
  CHECK(got[1].primes == std::vector<std::uint64_t>{37, 41});
  CHECK(got[2].m == 23);
  CHECK(got[2].first_prime == 89);
  CHECK(got[2].last_prime == 97);

  // the same list from the quadratic oracle
  const auto primes = oracle::trial_division_primes(100);
  const auto expect = oracle::naive_maximal_runs(primes, 2, 4, 1);
  REQUIRE(expect.size() == got.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    CHECK(got[i].m == expect[i].m);
    CHECK(got[i].k == expect[i].len);
    CHECK(got[i].first_prime == expect[i].first);
    CHECK(got[i].last_prime == expect[i].last);
  }
}

TEST_CASE("enumerate contract and empty budget") {
  CHECK_THROWS_AS(
      enumerate_runs(1, 2, 0, {100, std::nullopt}, [](const CongruentRun&) { return true; }),
      contract_violation);
  std::size_t count = 0;
  enumerate_runs(1, 4, 1, {2, std::nullopt}, [&](const CongruentRun&) {
    ++count;
    return true;
  });
  CHECK(count == 0);
}

TEST_CASE("oracle equivalence over random small queries") {
  const auto primes = oracle::trial_division_primes(100'000);
  std::mt19937_64 rng(77);
  const std::uint64_t qs[] = {2, 4, 8, 16};
  for (int trial = 0; trial < 40; ++trial) {
    const std::uint64_t q = qs[rng() % 4];
    std::uint64_t a = 1 + rng() % (q - 1);
    if (std::gcd(a, q) != 1) a = 1;
    const std::uint64_t k = 1 + rng() % 4;
    const SearchBudget budget{100'000, std::nullopt};
    const FindResult got = find_first_run(k, q, a, budget);
    const auto expect = oracle::naive_first_window(primes, k, q, a);
    if (expect) {
      REQUIRE(got.found());
      CHECK(got.run->m == expect->m);
      CHECK(got.run->first_prime == expect->first);
      CHECK(got.run->last_prime == expect->last);
    } else {
      CHECK(!got.found());
    }
  }
}

TEST_CASE("streaming and whole-table scans agree") {
  const PrimeTable table = sieve(200'000);
  std::mt19937_64 rng(31);
  const std::uint64_t qs[] = {2, 4, 8, 16};
  for (int trial = 0; trial < 20; ++trial) {
    const std::uint64_t q = qs[rng() % 4];
    std::uint64_t a = 1 + rng() % (q - 1);
    if (std::gcd(a, q) != 1) a = 1;
    const std::uint64_t k = 1 + rng() % 4;
    const SearchBudget budget{200'000, std::nullopt};
    const FindResult streamed = find_first_run(k, q, a, budget, 2);
    const FindResult tabled = find_first_run_in_table(k, q, a, table, budget);
    CHECK(streamed.found() == tabled.found());
    if (streamed.found()) {
      CHECK(streamed.run->m == tabled.run->m);
      CHECK(streamed.run->last_prime == tabled.run->last_prime);
    }
  }
}

TEST_CASE("max_index budget halts the scan") {
  const FindResult r = find_first_run(2, 4, 1, {1'000'000, 5});
  CHECK(!r.found());
  CHECK(r.frontier_index == 5);
  CHECK(r.frontier_prime == 11);
}

TEST_CASE("disjoint windows") {
  const auto [runs, frontier] = find_disjoint_runs(2, 4, 1, {100, std::nullopt}, 5);
  REQUIRE(runs.size() == 3);
  CHECK(runs[0].primes == std::vector<std::uint64_t>{13, 17});
  CHECK(runs[1].primes == std::vector<std::uint64_t>{37, 41});
  CHECK(runs[2].primes == std::vector<std::uint64_t>{89, 97});
  CHECK(frontier.frontier_prime == 97);
}

} // TEST_SUITE
