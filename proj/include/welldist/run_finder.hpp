#ifndef WELLDIST_RUN_FINDER_HPP
#define WELLDIST_RUN_FINDER_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <welldist/prime_engine.hpp>

namespace welldist {

// A run of k consecutive primes p_{m+1}, ..., p_{m+k}, all congruent to
// a modulo q.  `primes` materializes the run members when k is small
// (always the case for runs used as construction stages).
struct CongruentRun {
  std::uint64_t m = 0;
  std::uint64_t k = 0;
  std::uint64_t q = 0;
  std::uint64_t a = 0;
  std::uint64_t first_prime = 0;
  std::uint64_t last_prime = 0;
  std::vector<std::uint64_t> primes;
};

// Explicit stopping rule for a search that has no usable a-priori bound.
struct SearchBudget {
  std::uint64_t max_prime = 1'000'000'000ull;
  std::optional<std::uint64_t> max_index;
};

// Result of a bounded search: either a run, or the frontier the scan
// reached before giving up.
struct FindResult {
  std::optional<CongruentRun> run;
  std::uint64_t frontier_prime = 0; // last prime examined
  std::uint64_t frontier_index = 0; // its global index
  bool found() const { return run.has_value(); }
};

inline constexpr std::size_t kMaxMaterializedRun = 64;

// First (minimal m) window of k consecutive primes congruent to a mod q,
// scanning primes in order within the budget.  Requires gcd(a, q) = 1.
FindResult find_first_run(std::uint64_t k, std::uint64_t q, std::uint64_t a,
                          const SearchBudget& budget, unsigned threads = 1);

// Same scan over a prebuilt table (used to cross-check the streaming path).
FindResult find_first_run_in_table(std::uint64_t k, std::uint64_t q, std::uint64_t a,
                                   const PrimeTable& table, const SearchBudget& budget);

// Specialization to runs of n consecutive primes congruent to 1 mod 2^n.
FindResult ones_run_for_length(std::uint64_t n, const SearchBudget& budget,
                               unsigned threads = 1);

// All maximal runs of length >= k within the budget, in increasing m; a run
// still open when the budget frontier is reached is reported at the length
// observed so far.  The callback returns false to stop early.
void enumerate_runs(std::uint64_t k, std::uint64_t q, std::uint64_t a,
                    const SearchBudget& budget,
                    const std::function<bool(const CongruentRun&)>& emit,
                    unsigned threads = 1);

// First `count` pairwise-disjoint windows of exactly k congruent consecutive
// primes, in increasing m.  May return fewer when the budget runs out; the
// second member reports the scan frontier.
std::pair<std::vector<CongruentRun>, FindResult>
find_disjoint_runs(std::uint64_t k, std::uint64_t q, std::uint64_t a,
                   const SearchBudget& budget, std::size_t count, unsigned threads = 1);

} // namespace welldist

#endif // WELLDIST_RUN_FINDER_HPP
