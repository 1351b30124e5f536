#ifndef WELLDIST_ANALYSIS_HPP
#define WELLDIST_ANALYSIS_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include <welldist/construction.hpp>
#include <welldist/prime_engine.hpp>
#include <welldist/radix.hpp>

namespace welldist {

// One normalized exponential sum N^-1 sum_{n<=N} e(h * alpha * p_{n+m}).
struct WeylQuery {
  std::uint64_t h = 1;
  std::uint64_t N = 1;
  std::uint64_t shift = 0;
  RadixRational alpha;
  RadixRational alpha_tail; // certified bound on the part of alpha not in `alpha`
};

struct WeylResult {
  double sum_re = 0.0;
  double sum_im = 0.0;
  double magnitude = 0.0;
  // certified: the exact sum's magnitude differs from `magnitude` by at most
  // this much (truncated alpha, phase rounding, trig and accumulation error)
  double total_error_bound = 0.0;
};

// Resolves 1-based global prime indices, preferring the materialized run
// members carried by a construction state and falling back to a table.
class PrimeAccess {
public:
  explicit PrimeAccess(const PrimeTable& table) : table_(&table) {}
  explicit PrimeAccess(const ConstructionState& state) : state_(&state) {}
  PrimeAccess(const PrimeTable& table, const ConstructionState& state)
      : table_(&table), state_(&state) {}

  std::uint64_t prime_at(std::uint64_t index) const;

private:
  const PrimeTable* table_ = nullptr;
  const ConstructionState* state_ = nullptr;
};

// Exact phases {h * alpha * p_{shift+n}}, n = 1..N, one float rounding each.
std::vector<FloatWithError> window_phases(const RadixRational& alpha, std::uint64_t h,
                                          std::uint64_t shift, std::uint64_t N,
                                          const PrimeAccess& primes);

WeylResult weyl_sum(const WeylQuery& query, const PrimeAccess& primes);
WeylResult weyl_sum(const WeylQuery& query, const PrimeTable& table);

// Maximizing shift among the candidates; a certified lower bound for the
// supremum over all shifts, never an upper one.
std::pair<std::uint64_t, WeylResult> sup_over_shifts(std::uint64_t h, std::uint64_t N,
                                                     const std::vector<std::uint64_t>& shift_set,
                                                     const RadixRational& alpha,
                                                     const RadixRational& alpha_tail,
                                                     const PrimeAccess& primes);

// Per-run-member certified check of a strict upper bound.
struct DistanceCheck {
  std::uint64_t i = 0;      // position within the run, 1-based
  std::uint64_t prime = 0;
  double value = 0.0;       // ||h*alpha*(p-1)|| from the truncation, as a float
  RadixRational lower;      // certified enclosure of the exact distance
  RadixRational upper;
  Verdict verdict = Verdict::indeterminate;
};

struct DistanceReport {
  std::uint64_t k = 0;
  std::uint64_t h = 0;
  BigInt pi = 0;
  double bound = 0.0;       // the stage threshold, for display
  std::vector<DistanceCheck> checks;
  bool all_pass = false;
};

// Checks ||h * alpha * (p_{i+m_k} - 1)|| < pi_k^-2 for every member of the
// stage-k run, with the omitted-tail contribution folded into a certified
// enclosure.  Strict: ties report indeterminate.
DistanceReport verify_run_distance(const ConstructionState& state, std::uint64_t h,
                                   std::uint64_t k);

// Checks |e(h*alpha*p) - e(h*alpha)| = |e(h*alpha*(p-1)) - 1| < pi_k^-1,
// passing via |e(t)-1| <= 2*pi*||t|| and failing via |e(t)-1| >= 4*||t||.
DistanceReport verify_pointwise(const ConstructionState& state, std::uint64_t h,
                                std::uint64_t k);

struct SandwichReport {
  std::uint64_t k = 0;
  std::uint64_t h = 0;
  std::uint64_t N = 0;
  double magnitude = 0.0;
  double error_bound = 0.0;
  double lower_threshold = 0.0; // 1 - 1/pi_k
  Verdict lower_verdict = Verdict::indeterminate; // |S| > 1 - 1/pi_k
  Verdict upper_verdict = Verdict::indeterminate; // |S| <= 1
  Verdict verdict = Verdict::indeterminate;
};

// Checks 1 - pi_k^-1 < |N^-1 sum e(h alpha p_{n+m_k})| <= 1 for N run
// members, strict after widening by the sum's total error bound.
SandwichReport verify_sandwich(const ConstructionState& state, std::uint64_t h,
                               std::uint64_t k, std::uint64_t N, const PrimeAccess& primes);

struct ProfileRow {
  std::uint64_t N = 0;
  std::uint64_t best_shift = 0;
  double magnitude = 0.0;
  double error_bound = 0.0;
};

// Max sum magnitude over the shift set, per window length N.
std::vector<ProfileRow> shift_profile(std::uint64_t h, const RadixRational& alpha,
                                      const RadixRational& alpha_tail,
                                      const PrimeAccess& primes,
                                      const std::vector<std::uint64_t>& N_list,
                                      const std::vector<std::uint64_t>& shift_set);

} // namespace welldist

#endif // WELLDIST_ANALYSIS_HPP
