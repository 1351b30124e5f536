#ifndef WELLDIST_CONSTRUCTION_HPP
#define WELLDIST_CONSTRUCTION_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <welldist/radix.hpp>
#include <welldist/run_finder.hpp>

namespace welldist {

enum class BuildMode { faithful, relaxed, generalized };

const char* to_string(BuildMode m);
BuildMode build_mode_from_string(const std::string& s);

// Explicit per-stage plan (relaxed / generalized builds): search a run of
// `run_length` consecutive primes congruent to 1 modulo base^`modulus_exponent`
// and emit the digit `digit * base^-n_k`.
struct StagePlan {
  unsigned modulus_exponent = 0;
  std::uint64_t run_length = 0;
  BigInt digit = 1;
};

// A stage assembled without searching: fictitious run data used to exercise
// deep-stage arithmetic.  States carrying these are flagged synthetic and
// excluded from scientific reports.
struct InjectedStage {
  std::uint64_t n = 0; // digit exponent
  BigInt pi = 0;       // closing prime of the (possibly fictitious) run
  unsigned modulus_exponent = 0;
  std::uint64_t run_length = 0;
  BigInt digit = 1;
  std::optional<CongruentRun> run;
};

struct ConstructionParams {
  BuildMode mode = BuildMode::faithful;
  unsigned base = 2;
  std::uint64_t stages = 0; // truncation depth K: digits for k = 0..K
  SearchBudget budget;
  std::uint64_t h_max = 16;             // frequencies the digit rule must absorb
  std::uint64_t exponent_ceiling = 16384;
  unsigned threads = 1;

  // relaxed preset: run shape searched for every stage
  std::uint64_t preset_run_length = 4;
  unsigned preset_modulus_exponent = 5;

  std::vector<StagePlan> plans;          // explicit stage plans (non-faithful)
  std::vector<InjectedStage> injected;   // fixture stages; marks state synthetic
  std::optional<BigInt> explicit_next_exponent; // post-truncation rule override

  static ConstructionParams faithful_params(std::uint64_t stages, SearchBudget budget,
                                            unsigned threads = 1);
  static ConstructionParams relaxed_default(std::uint64_t stages = 2,
                                            SearchBudget budget = {},
                                            unsigned threads = 1);
};

struct StageRecord {
  std::uint64_t k = 0;
  std::uint64_t n = 0;  // digit exponent n_k
  unsigned j = 0;       // modulus exponent: run primes are 1 mod base^j
  std::uint64_t r = 0;  // run length used by this stage
  std::uint64_t m = 0;  // run is p_{m+1}..p_{m+r}
  BigInt modulus = 0;
  BigInt pi = 0;        // closing prime p_{m+r}
  BigInt digit = 1;
  std::optional<CongruentRun> run; // absent for fictitious deep stages
  bool synthetic = false;
};

struct Frontier {
  std::uint64_t scanned_prime = 0;
  std::uint64_t scanned_index = 0;
  std::string reason;
};

/*
 * The built object: per-stage records, the exact truncation
 *
 *     alpha = sum_{k<=K} digit_k * base^-n_k,
 *
 * and the data needed for a certified bound on the omitted tail.  The digit
 * exponents are strictly increasing; in faithful mode every closing prime
 * satisfies pi_k > 2^{n_k}, so the next exponent 4*pi_k more than squares
 * the previous modulus.
 */
struct ConstructionState {
  BuildMode mode = BuildMode::faithful;
  unsigned base = 2;
  std::uint64_t h_max = 16;
  std::uint64_t exponent_ceiling = 16384;
  std::vector<StageRecord> stages;
  RadixRational alpha;
  BigInt next_exponent = 0; // n_{K+1} under the declared growth rule
  bool have_next_exponent = false;
  BigInt b_max = 1;
  bool complete = false;
  bool synthetic = false;
  std::optional<Frontier> frontier;

  std::uint64_t stage_count() const { return stages.size(); }
  const StageRecord& stage(std::uint64_t k) const;
};

// Next digit exponent for a relaxed/generalized stage: large enough that
// every frequency h <= h_max and every prime p <= pi_k keeps the whole
// remaining digit mass below pi_k^-2, with the ceiling-capped 4*pi_k arm
// taken when it is larger.
std::uint64_t relaxed_next_exponent(std::uint64_t n_k, unsigned next_modulus_exponent,
                                    const BigInt& pi_k, std::uint64_t h_max,
                                    const BigInt& b_max, std::uint64_t exponent_ceiling,
                                    unsigned base);

// Append stage k+1 (or stage 0 on an empty state).  Returns the frontier
// instead of a state when the run search exhausts its budget.
struct StepResult {
  std::optional<ConstructionState> state;
  std::optional<Frontier> frontier;
  bool ok() const { return state.has_value(); }
};
StepResult step(const ConstructionState& state, const ConstructionParams& params);

// Run stages 0..K (or until a search gives out); partial results carry the
// frontier and complete = false.
ConstructionState build(const ConstructionParams& params);

// Certified upper bound on the omitted tail sum_{l>K} digit_l * base^-n_l,
// assuming digits bounded by b_max and exponents growing by the declared
// rule.  Throws tail_bound_unavailable when no rule is declared.
RadixRational tail_bound_of(const ConstructionState& state);

struct LiouvilleRecord {
  std::uint64_t k = 0;
  RadixRational q;         // integer base^{n_k}
  BigInt a = 0;            // nearest scaled integer: sum_{l<=k} digit_l * base^{n_k - n_l}
  bool coprime = false;    // gcd(q_k, a_k) == 1
  RadixRational gap_lower; // exact known part of |q_k alpha - a_k|
  RadixRational gap_upper; // gap_lower + q_k * tail bound
  RadixRational threshold; // q_k^-k
  Verdict verdict = Verdict::indeterminate; // certified |q_k alpha - a_k| < q_k^-k ?
};

// One record per stage; requires a tail bound (see tail_bound_of).
std::vector<LiouvilleRecord> liouville_records(const ConstructionState& state);

} // namespace welldist

#endif // WELLDIST_CONSTRUCTION_HPP
