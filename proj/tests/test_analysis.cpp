#include <doctest.h>

#include <cmath>
#include <random>

#include <welldist/analysis.hpp>

#include "oracles.hpp"

using namespace welldist;

namespace {

RadixRational dyadic(BigInt num, std::int64_t exp) { return RadixRational(2, std::move(num), exp); }

RadixRational zero2() { return RadixRational(2, 0, 0); }

ConstructionState small_relaxed_state() {
  ConstructionParams p = ConstructionParams::relaxed_default(1, {3'200'000, std::nullopt});
  p.preset_modulus_exponent = 4;
  return build(p);
}

} // namespace

TEST_SUITE("analysis") {

TEST_CASE("single term has unit magnitude") {
  const PrimeTable t = sieve(100);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    const RadixRational alpha = oracle::random_rational(rng, 2, 40, 30);
    WeylQuery q{1 + i % 7, 1, static_cast<std::uint64_t>(i % 10), alpha, zero2()};
    const WeylResult w = weyl_sum(q, t);
    CHECK(std::abs(w.magnitude - 1.0) <= w.total_error_bound + 1e-15);
    CHECK(w.magnitude <= 1.0 + w.total_error_bound);
  }
}

TEST_CASE("integral alpha gives the exact unit sum") {
  const PrimeTable t = sieve(1000);
  WeylQuery q{1, 50, 0, RadixRational::integer(1), zero2()};
  const WeylResult w = weyl_sum(q, t);
  CHECK(w.sum_re == 1.0);
  CHECK(w.sum_im == 0.0);
  CHECK(w.magnitude == 1.0);
}

TEST_CASE("alpha = 1/2 over the first three primes") {
  // phases: {2/2} = 0, {3/2} = 1/2, {5/2} = 1/2, so the mean is -1/3
  const PrimeTable t = sieve(100);
  WeylQuery q{1, 3, 0, dyadic(1, 1), zero2()};
  const WeylResult w = weyl_sum(q, t);
  CHECK(w.magnitude == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(w.sum_re == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("weyl sums match the 256-bit oracle within the certified bound") {
  const PrimeTable t = sieve(20'000);
  std::mt19937_64 rng(2025);
  for (int i = 0; i < 60; ++i) {
    const RadixRational alpha = oracle::random_rational(rng, 2, 60, 40);
    const std::uint64_t h = 1 + rng() % 8;
    const std::uint64_t N = 1 + rng() % 200;
    const std::uint64_t m = rng() % 64;
    WeylQuery q{h, N, m, alpha, zero2()};
    const WeylResult w = weyl_sum(q, t);
    std::vector<std::uint64_t> window;
    for (std::uint64_t n = 1; n <= N; ++n) window.push_back(t.nth_prime(m + n));
    const auto ref = oracle::weyl_oracle(alpha, h, window);
    const double diff =
        std::abs((ref.magnitude - oracle::Float256(w.magnitude)).convert_to<double>());
    CHECK(diff <= w.total_error_bound);
    CHECK(w.total_error_bound < 1e-9);
  }
}

TEST_CASE("phases depend only on residues for dyadic alpha") {
  const PrimeTable t = sieve(200'000);
  const std::int64_t e = 5;
  const RadixRational alpha = dyadic(11, e); // 11/32
  const std::uint64_t N = 10'000;
  PrimeAccess access(t);
  const auto phases = window_phases(alpha, 3, 0, N, access);
  const std::uint64_t mask = (1u << e) - 1;
  for (std::uint64_t n = 1; n <= N; ++n) {
    const std::uint64_t residue = t.nth_prime(n) & mask;
    const RadixRational expected = alpha.mul_int(BigInt(3) * residue).frac();
    CHECK(phases[n - 1].value == expected.to_float().value);
    CHECK(phases[n - 1].abs_error_bound == 0.0); // 53 bits suffice here
  }
  // residue-bucketed evaluation reproduces the sum to accumulation accuracy
  WeylQuery q{3, N, 0, alpha, zero2()};
  const WeylResult w = weyl_sum(q, t);
  double counts[32] = {0};
  for (std::uint64_t n = 1; n <= N; ++n) counts[t.nth_prime(n) & mask] += 1.0;
  double re = 0, im = 0;
  for (std::uint64_t r = 0; r < 32; ++r) {
    if (counts[r] == 0) continue;
    const double phase = alpha.mul_int(BigInt(3) * r).frac().to_float().value;
    re += counts[r] * std::cos(6.283185307179586232 * phase);
    im += counts[r] * std::sin(6.283185307179586232 * phase);
  }
  CHECK(std::hypot(re / N, im / N) == doctest::Approx(w.magnitude).epsilon(1e-11));
}

TEST_CASE("pointwise bound derivation holds on a grid") {
  // |e(t) - 1| = 2|sin(pi t)| <= 2 pi ||t||, and >= 4||t|| on [0, 1/2]
  for (int i = 0; i <= 1000; ++i) {
    const double theta = static_cast<double>(i) / 1000.0;
    const double dist = std::min(theta, 1.0 - theta);
    const double diff = 2.0 * std::abs(std::sin(M_PI * theta));
    CHECK(diff <= 2.0 * M_PI * dist + 1e-12);
    CHECK(diff + 1e-12 >= 4.0 * dist);
  }
}

TEST_CASE("run distance check on the faithful first stage") {
  const ConstructionState st =
      build(ConstructionParams::faithful_params(0, {1000, std::nullopt}));
  const DistanceReport rep = verify_run_distance(st, 1, 0);
  REQUIRE(rep.checks.size() == 1);
  CHECK(rep.checks[0].prime == 3);
  CHECK(rep.checks[0].value == 0.0); // ||(1/2)*2|| = 0 exactly
  CHECK(rep.checks[0].upper == dyadic(1, 10)); // tail 2^-11 scaled by h(p-1) = 2
  CHECK(rep.checks[0].verdict == Verdict::pass);
  CHECK(rep.all_pass);
}

TEST_CASE("distance and pointwise checks pass on a relaxed build") {
  const ConstructionState st = small_relaxed_state();
  REQUIRE(st.complete);
  for (std::uint64_t h = 1; h <= 16; ++h) {
    for (std::uint64_t k = 0; k < st.stage_count(); ++k) {
      CHECK(verify_run_distance(st, h, k).all_pass);
      CHECK(verify_pointwise(st, h, k).all_pass);
    }
  }
}

TEST_CASE("certified upper bounds shrink when the truncation deepens") {
  ConstructionParams one;
  one.mode = BuildMode::faithful;
  InjectedStage s0;
  s0.n = 1;
  s0.pi = 3;
  s0.modulus_exponent = 1;
  s0.run_length = 1;
  s0.run = CongruentRun{1, 1, 2, 1, 3, 3, {3}};
  one.injected = {s0};
  ConstructionParams two = one;
  InjectedStage s1;
  s1.n = 12;
  s1.pi = 12289;
  s1.modulus_exponent = 12;
  s1.run_length = 12;
  two.injected.push_back(s1);

  const DistanceReport shallow = verify_run_distance(build(one), 1, 0);
  const DistanceReport deep = verify_run_distance(build(two), 1, 0);
  CHECK(deep.checks[0].upper < shallow.checks[0].upper);
}

TEST_CASE("a growth violation is caught as a certified fail") {
  // digits at 2^-1 and 2^-2, second stage run {3, 5} congruent 1 mod 2:
  // ||(3/4) * (3-1)|| = 1/2, far above pi^-2 = 1/25
  ConstructionParams p;
  p.mode = BuildMode::relaxed;
  InjectedStage s0;
  s0.n = 1;
  s0.pi = 3;
  s0.modulus_exponent = 1;
  s0.run_length = 1;
  s0.run = CongruentRun{1, 1, 2, 1, 3, 3, {3}};
  InjectedStage s1;
  s1.n = 2;
  s1.pi = 5;
  s1.modulus_exponent = 1;
  s1.run_length = 2;
  s1.run = CongruentRun{1, 2, 2, 1, 3, 5, {3, 5}};
  p.injected = {s0, s1};
  const ConstructionState st = build(p);
  const DistanceReport rep = verify_run_distance(st, 1, 1);
  CHECK(!rep.all_pass);
  bool any_fail = false;
  for (const auto& c : rep.checks) any_fail = any_fail || c.verdict == Verdict::fail;
  CHECK(any_fail);
}

TEST_CASE("pointwise values: distance 1/4 gives sqrt(2)") {
  ConstructionParams p;
  p.mode = BuildMode::relaxed;
  InjectedStage s0;
  s0.n = 2; // alpha = 1/4
  s0.pi = 3;
  s0.modulus_exponent = 1;
  s0.run_length = 1;
  s0.run = CongruentRun{0, 1, 2, 1, 2, 2, {2}}; // p = 2: h(p-1) = 1
  p.injected = {s0};
  const ConstructionState st = build(p);
  const DistanceReport rep = verify_pointwise(st, 1, 0);
  REQUIRE(rep.checks.size() == 1);
  CHECK(rep.checks[0].value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(rep.checks[0].verdict == Verdict::fail); // sqrt(2) >= 1/pi = 1/3
}

TEST_CASE("sandwich on the relaxed build") {
  const ConstructionState st = small_relaxed_state();
  PrimeAccess access(st);
  for (std::uint64_t k = 0; k < st.stage_count(); ++k) {
    const StageRecord& s = st.stage(k);
    for (std::uint64_t h = 1; h <= 16; ++h) {
      for (std::uint64_t N = 1; N <= s.r; ++N) {
        const SandwichReport rep = verify_sandwich(st, h, k, N, access);
        CHECK(rep.verdict == Verdict::pass);
        CHECK(rep.magnitude > rep.lower_threshold);
      }
    }
    CHECK_THROWS_AS(verify_sandwich(st, 1, k, s.r + 1, access), contract_violation);
    CHECK_THROWS_AS(verify_sandwich(st, 1, k, 0, access), contract_violation);
  }
}

TEST_CASE("an indeterminate enclosure is reported as such") {
  // alpha = 1/16, run prime 2, pi = 4: the exact distance equals the
  // threshold and the tail makes the enclosure straddle it
  ConstructionParams p;
  p.mode = BuildMode::relaxed;
  InjectedStage s0;
  s0.n = 4;
  s0.pi = 4;
  s0.modulus_exponent = 2;
  s0.run_length = 1;
  s0.run = CongruentRun{0, 1, 4, 1, 2, 2, {2}};
  p.injected = {s0};
  const ConstructionState st = build(p);
  const DistanceReport rep = verify_run_distance(st, 1, 0);
  REQUIRE(rep.checks.size() == 1);
  CHECK(rep.checks[0].verdict == Verdict::indeterminate);
}

TEST_CASE("sup over shifts") {
  const PrimeTable t = sieve(10'000);
  const RadixRational alpha = dyadic(11, 5);
  PrimeAccess access(t);
  const auto [m0, w0] = sup_over_shifts(1, 10, {0}, alpha, zero2(), access);
  const WeylResult direct = weyl_sum(WeylQuery{1, 10, 0, alpha, zero2()}, t);
  CHECK(m0 == 0);
  CHECK(w0.magnitude == direct.magnitude);

  const auto [md, wd] = sup_over_shifts(1, 10, {7, 7, 7}, alpha, zero2(), access);
  CHECK(md == 7);

  const auto [mb, wb] = sup_over_shifts(1, 10, {0, 3, 7, 11}, alpha, zero2(), access);
  for (std::uint64_t m : {0ull, 3ull, 7ull, 11ull}) {
    const WeylResult w = weyl_sum(WeylQuery{1, 10, m, alpha, zero2()}, t);
    CHECK(w.magnitude <= wb.magnitude);
  }
  CHECK_THROWS_AS(sup_over_shifts(1, 10, {}, alpha, zero2(), access), contract_violation);
}

TEST_CASE("shift profile rows") {
  const ConstructionState st = small_relaxed_state();
  const PrimeTable t = sieve(200'000);
  PrimeAccess access(t, st);
  const RadixRational tail = tail_bound_of(st);

  CHECK(shift_profile(1, st.alpha, tail, access, {}, {0}).empty());

  std::vector<std::uint64_t> shifts;
  for (const StageRecord& s : st.stages) shifts.push_back(s.m);
  const auto rows = shift_profile(1, st.alpha, tail, access, {st.stage(0).r}, shifts);
  REQUIRE(rows.size() == 1);
  // along the constructed shifts the normalized sum stays within 1/pi of 1
  const double pi0 = st.stage(0).pi.convert_to<double>();
  CHECK(rows[0].magnitude > 1.0 - 1.0 / pi0);
}

TEST_CASE("prime access prefers run members and names missing indices") {
  const ConstructionState st = small_relaxed_state();
  PrimeAccess bare(st);
  const StageRecord& s0 = st.stage(0);
  CHECK(bare.prime_at(s0.m + 1) == s0.run->primes[0]);
  CHECK_THROWS_AS(bare.prime_at(1), index_error); // no table attached
  CHECK_THROWS_AS(bare.prime_at(0), index_error);

  const PrimeTable t = sieve(100);
  PrimeAccess both(t, st);
  CHECK(both.prime_at(1) == 2);
  try {
    both.prime_at(t.count() + 1000);
    CHECK(false);
  } catch (const index_error& e) {
    CHECK(std::string(e.what()).find(std::to_string(t.count() + 1000)) != std::string::npos);
  }
}

} // TEST_SUITE
