#include <welldist/run_finder.hpp>

#include <numeric>
#include <string>

namespace welldist {

namespace {

void check_query(std::uint64_t k, std::uint64_t q, std::uint64_t a) {
  if (q < 2) throw contract_violation("run query: q must be >= 2");
  if (a < 1 || a >= q) throw contract_violation("run query: residue must satisfy 1 <= a < q");
  if (std::gcd(a, q) != 1)
    throw contract_violation("run query: gcd(a, q) = " + std::to_string(std::gcd(a, q)) +
                             " != 1, the class holds at most one prime");
  if (k < 1) throw contract_violation("run query: k must be >= 1");
}

// Single forward pass over an ascending prime source.  O(1) state: the
// current streak of congruent primes (first members kept for the record).
template <typename NextFn>
FindResult scan_first_window(std::uint64_t k, std::uint64_t q, std::uint64_t a,
                             const SearchBudget& budget, NextFn&& next_prime) {
  FindResult result;
  std::uint64_t index = 0;
  std::uint64_t streak = 0;
  std::uint64_t streak_start_index = 0;
  std::vector<std::uint64_t> members;
  while (auto p = next_prime()) {
    if (*p > budget.max_prime) break;
    ++index;
    if (budget.max_index && index > *budget.max_index) {
      --index;
      break;
    }
    result.frontier_prime = *p;
    result.frontier_index = index;
    if (*p % q == a) {
      if (streak == 0) {
        streak_start_index = index;
        members.clear();
      }
      ++streak;
      if (members.size() < kMaxMaterializedRun) members.push_back(*p);
      if (streak == k) {
        CongruentRun run;
        run.m = streak_start_index - 1;
        run.k = k;
        run.q = q;
        run.a = a;
        run.first_prime = members.front();
        run.last_prime = *p;
        if (k <= kMaxMaterializedRun) run.primes = members;
        result.run = std::move(run);
        return result;
      }
    } else {
      streak = 0;
    }
  }
  return result;
}

} // namespace

FindResult find_first_run(std::uint64_t k, std::uint64_t q, std::uint64_t a,
                          const SearchBudget& budget, unsigned threads) {
  check_query(k, q, a);
  if (budget.max_prime < 2) throw contract_violation("budget: max_prime must be >= 2");
  SegmentedPrimeStream stream(budget.max_prime, threads);
  return scan_first_window(k, q, a, budget, [&] { return stream.next(); });
}

FindResult find_first_run_in_table(std::uint64_t k, std::uint64_t q, std::uint64_t a,
                                   const PrimeTable& table, const SearchBudget& budget) {
  check_query(k, q, a);
  std::size_t i = 0;
  return scan_first_window(k, q, a, budget, [&]() -> std::optional<std::uint64_t> {
    if (i >= table.count()) return std::nullopt;
    return table.primes()[i++];
  });
}

FindResult ones_run_for_length(std::uint64_t n, const SearchBudget& budget, unsigned threads) {
  if (n < 1) throw contract_violation("ones_run_for_length: n must be >= 1");
  if (n > 62)
    throw contract_violation("ones_run_for_length: modulus 2^" + std::to_string(n) +
                             " exceeds the searchable range");
  return find_first_run(n, 1ull << n, 1, budget, threads);
}

void enumerate_runs(std::uint64_t k, std::uint64_t q, std::uint64_t a,
                    const SearchBudget& budget,
                    const std::function<bool(const CongruentRun&)>& emit, unsigned threads) {
  check_query(k, q, a);
  if (budget.max_prime < 2) throw contract_violation("budget: max_prime must be >= 2");
  SegmentedPrimeStream stream(budget.max_prime, threads);
  std::uint64_t index = 0;
  std::uint64_t streak = 0;
  std::uint64_t streak_start_index = 0;
  std::vector<std::uint64_t> members;
  std::uint64_t last_member = 0;

  const auto flush = [&]() -> bool {
    if (streak < k) return true;
    CongruentRun run;
    run.m = streak_start_index - 1;
    run.k = streak;
    run.q = q;
    run.a = a;
    run.first_prime = members.front();
    run.last_prime = last_member;
    if (streak <= kMaxMaterializedRun) run.primes = members;
    return emit(run);
  };

  while (auto p = stream.next()) {
    if (*p > budget.max_prime) break;
    ++index;
    if (budget.max_index && index > *budget.max_index) break;
    if (*p % q == a) {
      if (streak == 0) {
        streak_start_index = index;
        members.clear();
      }
      ++streak;
      last_member = *p;
      if (members.size() < kMaxMaterializedRun) members.push_back(*p);
    } else {
      if (!flush()) return;
      streak = 0;
    }
  }
  flush(); // run still open at the frontier
}

std::pair<std::vector<CongruentRun>, FindResult>
find_disjoint_runs(std::uint64_t k, std::uint64_t q, std::uint64_t a,
                   const SearchBudget& budget, std::size_t count, unsigned threads) {
  check_query(k, q, a);
  if (budget.max_prime < 2) throw contract_violation("budget: max_prime must be >= 2");
  SegmentedPrimeStream stream(budget.max_prime, threads);
  std::vector<CongruentRun> found;
  FindResult frontier;
  std::uint64_t index = 0;
  std::uint64_t streak = 0;
  std::uint64_t streak_start_index = 0;
  std::vector<std::uint64_t> members;
  while (found.size() < count) {
    auto p = stream.next();
    if (!p || *p > budget.max_prime) break;
    ++index;
    if (budget.max_index && index > *budget.max_index) break;
    frontier.frontier_prime = *p;
    frontier.frontier_index = index;
    if (*p % q == a) {
      if (streak == 0) {
        streak_start_index = index;
        members.clear();
      }
      ++streak;
      if (members.size() < kMaxMaterializedRun) members.push_back(*p);
      if (streak == k) {
        CongruentRun run;
        run.m = streak_start_index - 1;
        run.k = k;
        run.q = q;
        run.a = a;
        run.first_prime = members.front();
        run.last_prime = *p;
        if (k <= kMaxMaterializedRun) run.primes = members;
        found.push_back(std::move(run));
        streak = 0; // next window must be disjoint
      }
    } else {
      streak = 0;
    }
  }
  return {std::move(found), std::move(frontier)};
}

} // namespace welldist
