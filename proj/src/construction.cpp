#include <welldist/construction.hpp>

#include <algorithm>
#include <string>

namespace welldist {

namespace {

namespace mp = boost::multiprecision;

std::uint64_t to_u64_checked(const BigInt& x, const char* what) {
  if (x < 0 || x > BigInt(UINT64_MAX))
    throw contract_violation(std::string(what) + ": value out of machine range");
  return x.convert_to<std::uint64_t>();
}

// smallest e with base^e >= x (x >= 1)
std::uint64_t ceil_log_base(const BigInt& x, unsigned base) {
  if (x <= 1) return 0;
  if (base == 2) return static_cast<std::uint64_t>(ceil_log2(x));
  BigInt p = 1;
  std::uint64_t e = 0;
  while (p < x) {
    p *= base;
    ++e;
  }
  return e;
}

RadixRational digit_term(unsigned base, const BigInt& digit, std::uint64_t n) {
  return RadixRational::power_term(base, n, digit);
}

void append_stage(ConstructionState& st, StageRecord rec) {
  if (!st.stages.empty() && rec.n <= st.stages.back().n)
    throw contract_violation("stage exponents must be strictly increasing");
  if (rec.digit < 1) throw contract_violation("stage digits must be >= 1");
  st.alpha = st.alpha + digit_term(st.base, rec.digit, rec.n);
  st.b_max = std::max(st.b_max, rec.digit);
  st.stages.push_back(std::move(rec));
}

void set_next_exponent_after(ConstructionState& st, const ConstructionParams& params,
                             unsigned next_modulus_exponent) {
  const StageRecord& last = st.stages.back();
  if (params.explicit_next_exponent) {
    st.next_exponent = *params.explicit_next_exponent;
  } else if (st.mode == BuildMode::faithful) {
    st.next_exponent = 4 * last.pi;
  } else {
    st.next_exponent = relaxed_next_exponent(last.n, next_modulus_exponent, last.pi,
                                             st.h_max, st.b_max, st.exponent_ceiling, st.base);
  }
  if (st.next_exponent <= BigInt(last.n))
    throw contract_violation("growth rule failed to increase the digit exponent");
  st.have_next_exponent = true;
}

} // namespace

const char* to_string(BuildMode m) {
  switch (m) {
    case BuildMode::faithful: return "faithful";
    case BuildMode::relaxed: return "relaxed";
    default: return "generalized";
  }
}

BuildMode build_mode_from_string(const std::string& s) {
  if (s == "faithful") return BuildMode::faithful;
  if (s == "relaxed") return BuildMode::relaxed;
  if (s == "generalized") return BuildMode::generalized;
  throw contract_violation("unknown build mode \"" + s + "\"");
}

ConstructionParams ConstructionParams::faithful_params(std::uint64_t stages, SearchBudget budget,
                                                       unsigned threads) {
  ConstructionParams p;
  p.mode = BuildMode::faithful;
  p.stages = stages;
  p.budget = budget;
  p.threads = threads;
  return p;
}

ConstructionParams ConstructionParams::relaxed_default(std::uint64_t stages, SearchBudget budget,
                                                       unsigned threads) {
  ConstructionParams p;
  p.mode = BuildMode::relaxed;
  p.stages = stages;
  p.budget = budget;
  p.threads = threads;
  return p;
}

const StageRecord& ConstructionState::stage(std::uint64_t k) const {
  if (k >= stages.size())
    throw index_error("stage " + std::to_string(k) + " not built (have " +
                      std::to_string(stages.size()) + ")");
  return stages[k];
}

std::uint64_t relaxed_next_exponent(std::uint64_t n_k, unsigned next_modulus_exponent,
                                    const BigInt& pi_k, std::uint64_t h_max,
                                    const BigInt& b_max, std::uint64_t exponent_ceiling,
                                    unsigned base) {
  if (pi_k < 2) throw contract_violation("relaxed_next_exponent: pi must be >= 2");
  const BigInt four_pi = 4 * pi_k;
  const std::uint64_t capped =
      four_pi > BigInt(exponent_ceiling) ? exponent_ceiling
                                         : four_pi.convert_to<std::uint64_t>();
  const BigInt mass = BigInt(h_max) * b_max * pi_k * pi_k * pi_k;
  const std::uint64_t smallness =
      n_k + next_modulus_exponent + ceil_log_base(mass, base);
  return std::max(capped, smallness);
}

namespace {

// Scan for the stage run.  `skip_index` ignores any window starting at or
// before that global prime index, so successive equal-shape stages pick
// pairwise disjoint runs.
FindResult stage_search(std::uint64_t run_length, const BigInt& modulus,
                        const ConstructionParams& params, std::uint64_t skip_index) {
  if (modulus > BigInt(UINT64_MAX) || bit_length(modulus) > 62) {
    FindResult r;
    r.frontier_prime = 0;
    r.frontier_index = 0;
    return r; // modulus not searchable at any feasible budget
  }
  const std::uint64_t q = modulus.convert_to<std::uint64_t>();
  SearchBudget budget = params.budget;
  SegmentedPrimeStream stream(budget.max_prime, params.threads);
  FindResult result;
  std::uint64_t index = 0, streak = 0, streak_start = 0;
  std::vector<std::uint64_t> members;
  while (auto p = stream.next()) {
    if (*p > budget.max_prime) break;
    ++index;
    if (budget.max_index && index > *budget.max_index) break;
    result.frontier_prime = *p;
    result.frontier_index = index;
    if (index <= skip_index) continue;
    if (*p % q == 1) {
      if (streak == 0) {
        streak_start = index;
        members.clear();
      }
      ++streak;
      if (members.size() < kMaxMaterializedRun) members.push_back(*p);
      if (streak == run_length) {
        CongruentRun run;
        run.m = streak_start - 1;
        run.k = run_length;
        run.q = q;
        run.a = 1;
        run.first_prime = members.front();
        run.last_prime = *p;
        if (run_length <= kMaxMaterializedRun) run.primes = members;
        result.run = std::move(run);
        return result;
      }
    } else {
      streak = 0;
    }
  }
  return result;
}

ConstructionState empty_state(const ConstructionParams& params) {
  ConstructionState st;
  st.mode = params.mode;
  st.base = params.base;
  st.h_max = params.h_max;
  st.exponent_ceiling = params.exponent_ceiling;
  st.alpha = RadixRational(params.base, 0, 0);
  st.b_max = 1;
  return st;
}

} // namespace

StepResult step(const ConstructionState& state, const ConstructionParams& params) {
  const std::uint64_t k = state.stage_count();
  ConstructionState next = state;

  std::uint64_t n_k;
  unsigned j_k;
  std::uint64_t r_k;
  BigInt digit = 1;
  if (state.mode == BuildMode::faithful) {
    if (k == 0) {
      n_k = 1;
    } else {
      if (!state.have_next_exponent)
        throw contract_violation("step: state lacks the next digit exponent");
      if (state.next_exponent > BigInt(62)) {
        Frontier f;
        f.reason = "stage " + std::to_string(k) + " needs modulus 2^" +
                   state.next_exponent.str() + ", beyond any searchable budget";
        return {std::nullopt, f};
      }
      n_k = state.next_exponent.convert_to<std::uint64_t>();
    }
    j_k = static_cast<unsigned>(n_k);
    r_k = n_k;
  } else {
    if (k >= params.plans.size())
      throw contract_violation("step: no stage plan for stage " + std::to_string(k));
    const StagePlan& plan = params.plans[k];
    j_k = plan.modulus_exponent;
    r_k = plan.run_length;
    digit = plan.digit;
    if (k == 0) {
      // the smallest planned modulus exponent: that digit divides h(p-1)
      // for the run primes of every stage
      unsigned jmin = plan.modulus_exponent;
      for (const auto& pl : params.plans) jmin = std::min(jmin, pl.modulus_exponent);
      n_k = jmin;
    } else {
      if (!state.have_next_exponent)
        throw contract_violation("step: state lacks the next digit exponent");
      n_k = to_u64_checked(state.next_exponent, "step: digit exponent");
    }
  }

  const BigInt modulus = pow_int(params.base, j_k);
  std::uint64_t skip_index = 0;
  if (state.mode != BuildMode::faithful && !state.stages.empty())
    skip_index = state.stages.back().m + state.stages.back().r;
  FindResult found = stage_search(r_k, modulus, params, skip_index);
  if (!found.found()) {
    Frontier f;
    f.scanned_prime = found.frontier_prime;
    f.scanned_index = found.frontier_index;
    if (f.reason.empty())
      f.reason = "stage " + std::to_string(k) + ": no run of " + std::to_string(r_k) +
                 " consecutive primes congruent to 1 mod " + modulus.str() +
                 " within max_prime " + std::to_string(params.budget.max_prime);
    return {std::nullopt, f};
  }

  StageRecord rec;
  rec.k = k;
  rec.n = n_k;
  rec.j = j_k;
  rec.r = r_k;
  rec.m = found.run->m;
  rec.modulus = modulus;
  rec.pi = found.run->last_prime;
  rec.digit = digit;
  rec.run = std::move(found.run);

  if (state.mode == BuildMode::faithful && !(rec.pi > pow_int(2, n_k)))
    throw contract_violation("faithful stage " + std::to_string(k) +
                             ": closing prime does not exceed 2^n_k");

  append_stage(next, std::move(rec));
  unsigned next_j = j_k;
  if (state.mode != BuildMode::faithful && k + 1 < params.plans.size())
    next_j = params.plans[k + 1].modulus_exponent;
  set_next_exponent_after(next, params, next_j);
  return {std::move(next), std::nullopt};
}

namespace {

ConstructionState build_injected(const ConstructionParams& params) {
  ConstructionState st = empty_state(params);
  st.synthetic = true;
  for (std::size_t k = 0; k < params.injected.size(); ++k) {
    const InjectedStage& inj = params.injected[k];
    StageRecord rec;
    rec.k = k;
    rec.n = inj.n;
    rec.j = inj.modulus_exponent;
    rec.r = inj.run_length;
    rec.m = inj.run ? inj.run->m : 0;
    rec.modulus = pow_int(params.base, inj.modulus_exponent);
    rec.pi = inj.pi;
    rec.digit = inj.digit;
    rec.run = inj.run;
    rec.synthetic = true;
    append_stage(st, std::move(rec));
  }
  if (!st.stages.empty()) {
    unsigned next_j = st.stages.back().j;
    set_next_exponent_after(st, params, next_j);
  } else if (params.explicit_next_exponent) {
    st.next_exponent = *params.explicit_next_exponent;
    st.have_next_exponent = true;
  }
  st.complete = true;
  return st;
}

ConstructionState build_relaxed_preset(const ConstructionParams& params) {
  if (params.preset_modulus_exponent < 1 || params.preset_modulus_exponent > 62)
    throw contract_violation("preset modulus exponent must lie in [1, 62]");
  ConstructionState st = empty_state(params);
  const std::uint64_t want = params.stages + 1;
  auto [runs, frontier] =
      find_disjoint_runs(params.preset_run_length,
                         1ull << params.preset_modulus_exponent, 1, params.budget,
                         want, params.threads);
  // Later runs close with larger primes; assign them to earlier stages so
  // each stage's digit rule, sized from its own closing prime, also covers
  // every later (smaller) stage.
  std::sort(runs.begin(), runs.end(),
            [](const CongruentRun& x, const CongruentRun& y) {
              return x.last_prime > y.last_prime;
            });
  std::uint64_t n = params.preset_modulus_exponent;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    StageRecord rec;
    rec.k = k;
    rec.n = n;
    rec.j = params.preset_modulus_exponent;
    rec.r = params.preset_run_length;
    rec.m = runs[k].m;
    rec.modulus = BigInt(runs[k].q);
    rec.pi = runs[k].last_prime;
    rec.digit = 1;
    rec.run = runs[k];
    append_stage(st, std::move(rec));
    n = relaxed_next_exponent(n, params.preset_modulus_exponent, BigInt(runs[k].last_prime),
                              params.h_max, st.b_max, params.exponent_ceiling, params.base);
  }
  if (!st.stages.empty()) {
    st.next_exponent = n;
    st.have_next_exponent = true;
  }
  st.complete = runs.size() == want;
  if (!st.complete) {
    Frontier f;
    f.scanned_prime = frontier.frontier_prime;
    f.scanned_index = frontier.frontier_index;
    f.reason = "preset found " + std::to_string(runs.size()) + " of " + std::to_string(want) +
               " disjoint runs within max_prime " + std::to_string(params.budget.max_prime);
    st.frontier = f;
  }
  return st;
}

} // namespace

ConstructionState build(const ConstructionParams& params) {
  if (params.base < 2) throw contract_violation("build: base must be >= 2");
  if (params.mode != BuildMode::generalized && params.base != 2)
    throw contract_violation("build: base must be 2 outside generalized mode");
  if (!params.injected.empty()) return build_injected(params);
  if (params.mode == BuildMode::relaxed && params.plans.empty())
    return build_relaxed_preset(params);
  if (params.mode != BuildMode::faithful && params.plans.size() < params.stages + 1)
    throw contract_violation("build: need a stage plan for every stage 0..K");

  ConstructionState st = empty_state(params);
  while (st.stage_count() < params.stages + 1) {
    StepResult r = step(st, params);
    if (!r.ok()) {
      st.frontier = r.frontier;
      st.complete = false;
      return st;
    }
    st = std::move(*r.state);
  }
  st.complete = true;
  return st;
}

RadixRational tail_bound_of(const ConstructionState& state) {
  if (!state.have_next_exponent)
    throw tail_bound_unavailable(
        "tail bound unavailable: no post-truncation growth rule is declared");
  // widen the exponent to a machine word when the rule pushes it beyond
  // anything representable; a smaller exponent only enlarges the bound
  const std::uint64_t n_last = state.stages.empty() ? 0 : state.stages.back().n;
  const std::uint64_t K1 = state.stage_count();
  const BigInt cap = std::max(BigInt(K1 + 1) * n_last + 64, BigInt(1'000'000));
  BigInt e = state.next_exponent;
  if (e > cap) e = cap;
  const std::uint64_t exp = to_u64_checked(e, "tail_bound_of: exponent");
  // ceil(b_max * base / (base - 1)) * base^-exp  >=  the geometric tail
  const BigInt c = (state.b_max * state.base + (state.base - 2)) / (state.base - 1);
  return RadixRational::power_term(state.base, exp, c);
}

std::vector<LiouvilleRecord> liouville_records(const ConstructionState& state) {
  const RadixRational tail = tail_bound_of(state);
  std::vector<LiouvilleRecord> out;
  const std::uint64_t K1 = state.stage_count();
  for (std::uint64_t k = 0; k < K1; ++k) {
    const StageRecord& sk = state.stages[k];
    LiouvilleRecord rec;
    rec.k = k;
    const BigInt Q = pow_int(state.base, sk.n);
    rec.q = RadixRational::integer(Q, state.base);
    BigInt a = 0;
    for (std::uint64_t l = 0; l <= k; ++l)
      a += state.stages[l].digit * pow_int(state.base, sk.n - state.stages[l].n);
    rec.a = a;
    rec.coprime = mp::gcd(Q, a) == 1;
    RadixRational after(state.base, 0, 0);
    for (std::uint64_t l = k + 1; l < K1; ++l)
      after = after + digit_term(state.base, state.stages[l].digit, state.stages[l].n);
    rec.gap_lower = after.mul_base_pow(static_cast<std::int64_t>(sk.n));
    rec.gap_upper = rec.gap_lower + tail.mul_base_pow(static_cast<std::int64_t>(sk.n));
    if (k * sk.n > static_cast<std::uint64_t>(INT64_MAX))
      throw contract_violation("liouville_records: threshold exponent out of range");
    rec.threshold = RadixRational::power_term(state.base, k * sk.n);
    if (rec.gap_upper < rec.threshold)
      rec.verdict = Verdict::pass;
    else if (rec.gap_lower >= rec.threshold)
      rec.verdict = Verdict::fail;
    else
      rec.verdict = Verdict::indeterminate;
    out.push_back(std::move(rec));
  }
  return out;
}

} // namespace welldist
