#include <welldist/analysis.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace welldist {

namespace {

// 2*pi brackets: the closest double is below the true value.
constexpr double kTwoPiLow = 6.283185307179586232;
const double kTwoPiUp = std::nextafter(kTwoPiLow, std::numeric_limits<double>::infinity());
constexpr double kEps = 0x1p-52;

// Per-term float slack: argument rounding (<= 4 eps) plus two <= 2-ulp trig
// evaluations (<= 3 eps in modulus), with headroom.
constexpr double kPerTermTrigErr = 12 * kEps;

struct Complex {
  double re = 0.0, im = 0.0;
};

Complex pairwise_sum(const std::vector<Complex>& terms, std::size_t lo, std::size_t hi) {
  if (hi - lo <= 8) {
    Complex s;
    for (std::size_t i = lo; i < hi; ++i) {
      s.re += terms[i].re;
      s.im += terms[i].im;
    }
    return s;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  const Complex a = pairwise_sum(terms, lo, mid);
  const Complex b = pairwise_sum(terms, mid, hi);
  return {a.re + b.re, a.im + b.im};
}

RadixRational clamp_nonneg(RadixRational x) {
  if (x.sign() < 0) return RadixRational(x.base(), 0, 0);
  return x;
}

double display_double(const RadixRational& x) {
  try {
    return x.to_float().value;
  } catch (const float_overflow_error&) {
    return std::numeric_limits<double>::infinity();
  }
}

} // namespace

std::uint64_t PrimeAccess::prime_at(std::uint64_t index) const {
  if (index == 0) throw index_error("prime_at: indices are 1-based");
  if (state_) {
    for (const StageRecord& s : state_->stages) {
      if (!s.run || s.run->primes.empty()) continue;
      const std::uint64_t lo = s.run->m + 1;
      const std::uint64_t hi = s.run->m + s.run->primes.size();
      if (index >= lo && index <= hi) return s.run->primes[index - lo];
    }
  }
  if (table_ && index <= table_->count()) return table_->nth_prime(index);
  throw index_error("prime_at: prime index " + std::to_string(index) +
                    " is not covered by the run records" +
                    (table_ ? " or the table (count " + std::to_string(table_->count()) + ")"
                            : " and no table was given"));
}

std::vector<FloatWithError> window_phases(const RadixRational& alpha, std::uint64_t h,
                                          std::uint64_t shift, std::uint64_t N,
                                          const PrimeAccess& primes) {
  if (h < 1) throw contract_violation("window_phases: h must be >= 1");
  std::vector<FloatWithError> out;
  out.reserve(N);
  for (std::uint64_t n = 1; n <= N; ++n) {
    const std::uint64_t p = primes.prime_at(shift + n);
    const RadixRational phase = alpha.mul_int(BigInt(h) * p).frac();
    out.push_back(phase.to_float());
  }
  return out;
}

WeylResult weyl_sum(const WeylQuery& query, const PrimeAccess& primes) {
  if (query.h < 1 || query.N < 1)
    throw contract_violation("weyl_sum: h and N must be >= 1");
  if (query.alpha_tail.sign() < 0)
    throw contract_violation("weyl_sum: alpha_tail must be >= 0");
  const double tail_up = query.alpha_tail.is_zero() ? 0.0 : query.alpha_tail.upper_double();

  std::vector<Complex> terms;
  terms.reserve(query.N);
  double err_sum = 0.0;
  for (std::uint64_t n = 1; n <= query.N; ++n) {
    const std::uint64_t p = primes.prime_at(query.shift + n);
    const RadixRational phase = query.alpha.mul_int(BigInt(query.h) * p).frac();
    const FloatWithError th = phase.to_float();
    const double x = kTwoPiLow * th.value;
    terms.push_back({std::cos(x), std::sin(x)});
    const double hp = static_cast<double>(query.h) * static_cast<double>(p);
    err_sum += kTwoPiUp * (hp * tail_up + th.abs_error_bound) + kPerTermTrigErr;
  }
  const Complex s = pairwise_sum(terms, 0, terms.size());
  const double Nd = static_cast<double>(query.N);

  WeylResult r;
  r.sum_re = s.re / Nd;
  r.sum_im = s.im / Nd;
  r.magnitude = std::hypot(r.sum_re, r.sum_im);

  const double levels = std::ceil(std::log2(std::max<double>(2.0, Nd)));
  double bound = err_sum / Nd + kEps * (levels + 4.0);
  bound *= 1.0 + 0x1p-30; // absorb the bound arithmetic's own rounding
  r.total_error_bound = std::nextafter(bound, std::numeric_limits<double>::infinity());
  return r;
}

WeylResult weyl_sum(const WeylQuery& query, const PrimeTable& table) {
  return weyl_sum(query, PrimeAccess(table));
}

std::pair<std::uint64_t, WeylResult> sup_over_shifts(std::uint64_t h, std::uint64_t N,
                                                     const std::vector<std::uint64_t>& shift_set,
                                                     const RadixRational& alpha,
                                                     const RadixRational& alpha_tail,
                                                     const PrimeAccess& primes) {
  if (shift_set.empty()) throw contract_violation("sup_over_shifts: empty shift set");
  std::vector<std::uint64_t> shifts = shift_set;
  std::sort(shifts.begin(), shifts.end());
  shifts.erase(std::unique(shifts.begin(), shifts.end()), shifts.end());

  std::uint64_t best_shift = shifts.front();
  WeylResult best;
  bool first = true;
  for (std::uint64_t m : shifts) {
    WeylQuery q{h, N, m, alpha, alpha_tail};
    WeylResult w = weyl_sum(q, primes);
    if (first || w.magnitude > best.magnitude) {
      best = w;
      best_shift = m;
      first = false;
    }
  }
  return {best_shift, best};
}

namespace {

struct StageContext {
  const StageRecord* stage;
  RadixRational tail;
};

StageContext stage_context(const ConstructionState& state, std::uint64_t k) {
  const StageRecord& s = state.stage(k);
  if (!s.run || s.run->primes.size() < s.r)
    throw contract_violation("stage " + std::to_string(k) +
                             " has no materialized run members to verify");
  return {&s, tail_bound_of(state)};
}

} // namespace

DistanceReport verify_run_distance(const ConstructionState& state, std::uint64_t h,
                                   std::uint64_t k) {
  if (h < 1) throw contract_violation("verify_run_distance: h must be >= 1");
  const StageContext ctx = stage_context(state, k);
  const StageRecord& s = *ctx.stage;
  const BigInt pi_sq = s.pi * s.pi;

  DistanceReport report;
  report.k = k;
  report.h = h;
  report.pi = s.pi;
  {
    const double pid = s.pi.convert_to<double>();
    report.bound = 1.0 / (pid * pid);
  }
  report.all_pass = true;
  for (std::uint64_t i = 1; i <= s.r; ++i) {
    const std::uint64_t p = s.run->primes[i - 1];
    const BigInt factor = BigInt(h) * (BigInt(p) - 1);
    const RadixRational d = state.alpha.mul_int(factor).dist_to_nearest_int();
    const RadixRational t = ctx.tail.mul_int(factor);
    DistanceCheck chk;
    chk.i = i;
    chk.prime = p;
    chk.value = display_double(d);
    chk.lower = clamp_nonneg(d - t);
    chk.upper = d + t;
    chk.verdict = certify_less_than_fraction(chk.lower, chk.upper, 1, pi_sq);
    if (chk.verdict != Verdict::pass) report.all_pass = false;
    report.checks.push_back(std::move(chk));
  }
  return report;
}

DistanceReport verify_pointwise(const ConstructionState& state, std::uint64_t h,
                                std::uint64_t k) {
  if (h < 1) throw contract_violation("verify_pointwise: h must be >= 1");
  const StageContext ctx = stage_context(state, k);
  const StageRecord& s = *ctx.stage;

  DistanceReport report;
  report.k = k;
  report.h = h;
  report.pi = s.pi;
  report.bound = 1.0 / s.pi.convert_to<double>();
  report.all_pass = true;
  for (std::uint64_t i = 1; i <= s.r; ++i) {
    const std::uint64_t p = s.run->primes[i - 1];
    const BigInt factor = BigInt(h) * (BigInt(p) - 1);
    const RadixRational d = state.alpha.mul_int(factor).dist_to_nearest_int();
    const RadixRational t = ctx.tail.mul_int(factor);
    const RadixRational lower = clamp_nonneg(d - t);
    const RadixRational upper = d + t;

    DistanceCheck chk;
    chk.i = i;
    chk.prime = p;
    chk.value = 2.0 * std::abs(std::sin(kTwoPiLow / 2.0 * display_double(d)));
    chk.lower = lower;
    chk.upper = upper;
    // pass:  |e(t)-1| <= 2*pi*||t|| <= 2*pi*upper, and 2*pi < 710/113,
    //        so upper < 113/(710*pi_k) suffices for strict < 1/pi_k
    // fail:  |e(t)-1| = 2*sin(pi*||t||) >= 4*||t|| >= 4*lower on [0, 1/2]
    if (certify_less_than_fraction(chk.lower, upper, 113, BigInt(710) * s.pi) == Verdict::pass) {
      chk.verdict = Verdict::pass;
    } else if (certify_less_than_fraction(lower, lower, 1, 4 * s.pi) == Verdict::fail) {
      chk.verdict = Verdict::fail;
    } else {
      chk.verdict = Verdict::indeterminate;
    }
    if (chk.verdict != Verdict::pass) report.all_pass = false;
    report.checks.push_back(std::move(chk));
  }
  return report;
}

SandwichReport verify_sandwich(const ConstructionState& state, std::uint64_t h,
                               std::uint64_t k, std::uint64_t N, const PrimeAccess& primes) {
  if (h < 1) throw contract_violation("verify_sandwich: h must be >= 1");
  const StageRecord& s = state.stage(k);
  if (N < 1 || N > s.r)
    throw contract_violation("verify_sandwich: N = " + std::to_string(N) +
                             " outside [1, r_k = " + std::to_string(s.r) + "]");
  const RadixRational tail = tail_bound_of(state);

  WeylQuery q{h, N, s.m, state.alpha, tail};
  const WeylResult w = weyl_sum(q, primes);

  SandwichReport rep;
  rep.k = k;
  rep.h = h;
  rep.N = N;
  rep.magnitude = w.magnitude;
  rep.error_bound = w.total_error_bound;
  rep.lower_threshold = 1.0 - 1.0 / s.pi.convert_to<double>();

  const RadixRational mag = RadixRational::from_double(w.magnitude);
  const RadixRational err = RadixRational::from_double(w.total_error_bound);
  const RadixRational lo = clamp_nonneg(mag - err);
  const RadixRational hi = mag + err;

  // |S| > 1 - 1/pi_k, strict after widening
  rep.lower_verdict = certify_greater_than_fraction(lo, hi, s.pi - 1, s.pi);
  // |S| <= 1 holds a priori for a mean of unit vectors; the certified lower
  // end must not contradict it
  rep.upper_verdict =
      lo <= RadixRational::integer(1, lo.base()) ? Verdict::pass : Verdict::fail;

  if (rep.lower_verdict == Verdict::pass && rep.upper_verdict == Verdict::pass)
    rep.verdict = Verdict::pass;
  else if (rep.lower_verdict == Verdict::fail || rep.upper_verdict == Verdict::fail)
    rep.verdict = Verdict::fail;
  else
    rep.verdict = Verdict::indeterminate;
  return rep;
}

std::vector<ProfileRow> shift_profile(std::uint64_t h, const RadixRational& alpha,
                                      const RadixRational& alpha_tail,
                                      const PrimeAccess& primes,
                                      const std::vector<std::uint64_t>& N_list,
                                      const std::vector<std::uint64_t>& shift_set) {
  std::vector<ProfileRow> rows;
  for (std::uint64_t N : N_list) {
    const auto [shift, w] = sup_over_shifts(h, N, shift_set, alpha, alpha_tail, primes);
    rows.push_back({N, shift, w.magnitude, w.total_error_bound});
  }
  return rows;
}

} // namespace welldist
