// Acceptance suite: one line per criterion, strict certified comparisons,
// hard runtime ceilings.  Exit code 0 only if every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <welldist/analysis.hpp>
#include <welldist/construction.hpp>
#include <welldist/distribution.hpp>
#include <welldist/prime_engine.hpp>
#include <welldist/run_finder.hpp>

#include "oracles.hpp"

using namespace welldist;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

struct Criterion {
  int id;
  const char* label;
  double limit_seconds;
  Clock::time_point started = Clock::now();

  void finish(bool ok, const std::string& detail) {
    const double secs =
        std::chrono::duration_cast<std::chrono::duration<double>>(Clock::now() - started).count();
    const bool in_time = limit_seconds <= 0 || secs < limit_seconds;
    if (!ok || !in_time) ++failures;
    std::printf("[%s] criterion %d: %s (%.2fs%s) %s\n", (ok && in_time) ? "PASS" : "FAIL", id,
                label, secs, in_time ? "" : " OVER LIMIT", detail.c_str());
    std::fflush(stdout);
  }
};

// ---------------------------------------------------------------- 1
void criterion1() {
  Criterion c{1, "faithful stage 0 reproduces (n0, m0, pi0, n1) = (1, 1, 3, 12)", 1.0};
  const ConstructionState st =
      build(ConstructionParams::faithful_params(0, {10'000, std::nullopt}));
  bool ok = st.complete && st.stage_count() == 1;
  if (ok) {
    const StageRecord& s = st.stage(0);
    ok = s.n == 1 && s.m == 1 && s.pi == 3 && st.next_exponent == 12 && s.run.has_value() &&
         s.run->primes == std::vector<std::uint64_t>{3} && (3 % 2 == 1);
  }
  c.finish(ok, "");
}

// ---------------------------------------------------------------- 2
void criterion2() {
  Criterion c{2, "first runs match a naive scan for k<=4, q in {2,4,8,16}, primes < 1e6", 30.0};
  const PrimeTable table = sieve(1'000'000);
  const std::vector<std::uint64_t>& primes = table.primes();
  bool ok = true;
  int queries = 0;
  for (std::uint64_t q : {2ull, 4ull, 8ull, 16ull}) {
    for (std::uint64_t a = 1; a < q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      for (std::uint64_t k = 1; k <= 4; ++k) {
        ++queries;
        const FindResult got = find_first_run(k, q, a, {1'000'000, std::nullopt});
        const auto expect = oracle::naive_first_window(primes, k, q, a);
        if (expect.has_value() != got.found()) {
          ok = false;
          continue;
        }
        if (expect &&
            (got.run->m != expect->m || got.run->first_prime != expect->first ||
             got.run->last_prime != expect->last))
          ok = false;
      }
    }
  }
  c.finish(ok, std::to_string(queries) + " queries");
}

// ---------------------------------------------------------------- 3
void criterion3() {
  Criterion c{3, "exact ops match a 256-bit oracle on 1e4 random cases", 10.0};
  std::mt19937_64 rng(0xACCE97);
  const oracle::Float256 tol = pow(oracle::Float256(2), -200);
  bool ok = true;
  for (int i = 0; i < 10'000 && ok; ++i) {
    const RadixRational x = oracle::random_rational(rng, 2, 150, 180);
    const BigInt cmul = BigInt(rng() % (1ull << 30)) - (1 << 29);

    const oracle::Float256 xv = oracle::value_of(x);
    const oracle::Float256 fr = xv - floor(xv);
    const oracle::Float256 om = 1 - fr;
    const oracle::Float256 dist = fr < om ? fr : om;
    if (abs(oracle::value_of(x.frac()) - fr) > tol) ok = false;
    if (abs(oracle::value_of(x.dist_to_nearest_int()) - dist) > tol) ok = false;
    if (abs(oracle::value_of(x.mul_int(cmul)) - xv * oracle::Float256(cmul.str())) > tol)
      ok = false;

    const FloatWithError f = x.to_float();
    if (abs(xv - oracle::Float256(f.value)) > oracle::Float256(f.abs_error_bound)) ok = false;
  }
  c.finish(ok, "");
}

// ---------------------------------------------------------------- 4
// builds the headline state (shared with criteria 5 and 7) inside its own
// runtime budget
ConstructionState criterion4() {
  Criterion c{4, "relaxed preset: distance, pointwise and sandwich certified for h <= 16", 600.0};
  ConstructionParams params =
      ConstructionParams::relaxed_default(2, {1'000'000'000ull, std::nullopt}, 2);
  const ConstructionState st = build(params);
  bool ok = st.complete && st.stage_count() == 3;
  std::string detail;
  if (!ok) {
    detail = st.frontier ? st.frontier->reason : "build incomplete";
  } else {
    for (const StageRecord& s : st.stages) {
      if (s.r < 4 || s.j < 4) ok = false; // preset floor: run length and modulus exponent
    }
    PrimeAccess access(st);
    std::uint64_t checks = 0;
    for (std::uint64_t h = 1; h <= st.h_max && ok; ++h) {
      for (std::uint64_t k = 0; k < st.stage_count() && ok; ++k) {
        const DistanceReport dist = verify_run_distance(st, h, k);
        const DistanceReport pw = verify_pointwise(st, h, k);
        if (!dist.all_pass || !pw.all_pass) ok = false;
        checks += dist.checks.size() + pw.checks.size();
        for (std::uint64_t N = 1; N <= st.stage(k).r && ok; ++N) {
          if (verify_sandwich(st, h, k, N, access).verdict != Verdict::pass) ok = false;
          ++checks;
        }
      }
    }
    detail = std::to_string(checks) + " certified checks, stages close at " +
             st.stage(0).pi.str() + " / " + st.stage(1).pi.str() + " / " + st.stage(2).pi.str();
  }
  c.finish(ok, detail);
  return st;
}

// ---------------------------------------------------------------- 5
void criterion5(const ConstructionState& st) {
  Criterion c{5, "contrast: shifted D* >= 0.45, unshifted D*(N=1e4) < 0.05", 120.0};
  if (!st.complete) {
    c.finish(false, "no complete state");
    return;
  }
  const PrimeTable table = sieve(nth_prime_upper_bound(10'050));
  PrimeAccess access(table, st);
  const StageRecord& last = st.stage(st.stage_count() - 1);
  const auto reports =
      window_profile(st.alpha, 1, access, {{last.m, last.r}, {0, 10'000}});
  const double shifted = reports[0].d_star;
  const double unshifted = reports[1].d_star;
  const bool ok = shifted >= 0.45 && unshifted < 0.05;
  char detail[128];
  std::snprintf(detail, sizeof(detail), "shifted %.5f, unshifted %.5f", shifted, unshifted);
  c.finish(ok, detail);
}

// ---------------------------------------------------------------- 6
void criterion6() {
  Criterion c{6, "weyl sums within the certified bound of a 256-bit oracle, bound < 1e-9", 60.0};
  const PrimeTable table = sieve(20'000);
  std::mt19937_64 rng(0x5EED6);
  bool ok = true;
  for (int i = 0; i < 100 && ok; ++i) {
    const RadixRational alpha = oracle::random_rational(rng, 2, 64, 48);
    const std::uint64_t h = 1 + rng() % 8;
    const std::uint64_t N = 1 + rng() % 1000;
    const std::uint64_t m = rng() % 100;
    const WeylResult w = weyl_sum(WeylQuery{h, N, m, alpha, RadixRational(2, 0, 0)}, table);
    std::vector<std::uint64_t> window;
    for (std::uint64_t n = 1; n <= N; ++n) window.push_back(table.nth_prime(m + n));
    const auto ref = oracle::weyl_oracle(alpha, h, window);
    const double diff =
        std::abs((ref.magnitude - oracle::Float256(w.magnitude)).convert_to<double>());
    if (diff > w.total_error_bound) ok = false;
    if (!(w.total_error_bound < 1e-9)) ok = false;
  }
  c.finish(ok, "100 queries");
}

// ---------------------------------------------------------------- 7
void criterion7(const ConstructionState& relaxed) {
  Criterion c{7, "scaled-gap table reported; synthetic faithful-growth fixture passes k >= 2", 60.0};
  bool ok = relaxed.complete;
  std::string detail;
  if (ok) {
    const auto records = liouville_records(relaxed);
    ok = records.size() == relaxed.stage_count();
    for (const LiouvilleRecord& rec : records) {
      if (!rec.coprime) ok = false;
      if (rec.gap_upper < rec.gap_lower) ok = false;
      detail += (detail.empty() ? "relaxed verdicts: " : ", ") + std::string(to_string(rec.verdict));
    }
  }
  // fixture with the faithful growth rule: real stage 0, then synthetic
  // stages keeping pi_k > 2^{n_k} and n_{k+1} = 4 pi_k
  ConstructionParams p;
  p.mode = BuildMode::faithful;
  InjectedStage s0{1, 3, 1, 1, 1, CongruentRun{1, 1, 2, 1, 3, 3, {3}}};
  InjectedStage s1{12, 12289, 12, 12, 1, std::nullopt};
  InjectedStage s2{4 * 12289, (BigInt(1) << (4 * 12289)) + 1, 62, 4 * 12289, 1, std::nullopt};
  p.injected = {s0, s1, s2};
  const ConstructionState fixture = build(p);
  const auto records = liouville_records(fixture);
  if (records.size() != 3) {
    ok = false;
  } else {
    for (std::size_t k = 2; k < records.size(); ++k)
      if (records[k].verdict != Verdict::pass) ok = false;
    for (const LiouvilleRecord& rec : records)
      if (!rec.coprime || rec.a % 2 != 1) ok = false;
  }
  c.finish(ok, detail);
}

// ---------------------------------------------------------------- 8
void criterion8() {
  Criterion c{8, "star discrepancy equals O(N^2) enumeration on 100 random sets", 30.0};
  std::mt19937_64 rng(0xD15C);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::uniform_int_distribution<int> sizes(1, 200);
  bool ok = true;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> pts(sizes(rng));
    for (double& x : pts) x = uni(rng);
    const double fast = star_discrepancy(PointSet(pts)).d_star;
    const double brute = oracle::brute_star_discrepancy(pts);
    if (std::abs(fast - brute) > 2.0 * std::ldexp(1.0, -52)) ok = false;
  }
  c.finish(ok, "");
}

} // namespace

int main() {
  std::printf("acceptance suite\n");
  criterion1();
  criterion2();
  criterion3();
  const ConstructionState headline = criterion4();
  criterion5(headline);
  criterion6();
  criterion7(headline);
  criterion8();

  std::printf(failures == 0 ? "ALL CRITERIA PASS\n" : "%d CRITERIA FAILED\n", failures);
  return failures == 0 ? 0 : 1;
}
