#ifndef WELLDIST_RADIX_HPP
#define WELLDIST_RADIX_HPP

#include <cstdint>
#include <string>
#include <compare>

#include <welldist/bigint.hpp>
#include <welldist/errors.hpp>

namespace welldist {

// A machine float together with a certified bound on its distance from the
// real value it stands for: the real lies in [value - abs_error_bound,
// value + abs_error_bound].
struct FloatWithError {
  double value = 0.0;
  double abs_error_bound = 0.0;
};

/*
 * Exact arithmetic on numbers of the form
 *
 *     value = numerator / base^exponent,   base >= 2, exponent >= 0,
 *
 * with an unbounded signed numerator.  Canonical form: either the numerator
 * is zero and the exponent is zero, or the base does not divide the
 * numerator.  Two canonical values with the same base are equal iff they are
 * equal field-wise.
 *
 * Sums, integer multiples, fractional parts and distances to the nearest
 * integer are all closed over this set and computed without rounding; the
 * only lossy operation is to_float(), which returns the nearest double with
 * an explicit error bound (<= one ulp of the result, zero when exact).
 */
class RadixRational {
public:
  RadixRational() : base_(2), num_(0), exp_(0) {}

  RadixRational(unsigned base, BigInt numerator, std::int64_t exponent)
      : base_(base), num_(std::move(numerator)), exp_(exponent) {
    if (base_ < 2) throw contract_violation("RadixRational: base must be >= 2");
    if (exp_ < 0) throw contract_violation("RadixRational: exponent must be >= 0");
    normalize();
  }

  // value = n (an integer), in the given base.
  static RadixRational integer(BigInt n, unsigned base = 2) {
    return RadixRational(base, std::move(n), 0);
  }

  // value = c * base^-e.
  static RadixRational power_term(unsigned base, std::uint64_t e, BigInt c = 1) {
    if (e > static_cast<std::uint64_t>(INT64_MAX))
      throw contract_violation("RadixRational: exponent out of range");
    return RadixRational(base, std::move(c), static_cast<std::int64_t>(e));
  }

  // Exact embedding of a finite double (base 2 only).
  static RadixRational from_double(double d);

  unsigned base() const { return base_; }
  const BigInt& numerator() const { return num_; }
  std::int64_t exponent() const { return exp_; }

  bool is_zero() const { return num_ == 0; }
  int sign() const { return num_ == 0 ? 0 : (num_ < 0 ? -1 : 1); }
  bool is_integer() const { return exp_ == 0; }

  bool operator==(const RadixRational& o) const = default;

  // Exact sum; both operands must share a base.
  RadixRational add(const RadixRational& other) const;
  RadixRational operator+(const RadixRational& o) const { return add(o); }
  RadixRational operator-() const { return RadixRational(base_, -num_, exp_, no_normalize_tag{}); }
  RadixRational operator-(const RadixRational& o) const { return add(-o); }

  // Exact product with an integer.
  RadixRational mul_int(const BigInt& c) const;

  // Exact product with base^j (j may be negative).
  RadixRational mul_base_pow(std::int64_t j) const;

  // Largest integer <= value.
  BigInt floor_value() const;

  // Fractional part in [0, 1):  value - floor(value).
  RadixRational frac() const;

  // Distance to the nearest integer, in [0, 1/2].
  RadixRational dist_to_nearest_int() const;

  // Nearest double with a certified error bound; throws float_overflow_error
  // when the value exceeds the double range.
  FloatWithError to_float() const;

  // Certified double upper / lower bounds on the exact value.
  double upper_double() const;
  double lower_double() const;

  // Sign of (*this - other); bases must match.
  int compare(const RadixRational& other) const;
  bool operator<(const RadixRational& o) const { return compare(o) < 0; }
  bool operator<=(const RadixRational& o) const { return compare(o) <= 0; }
  bool operator>(const RadixRational& o) const { return compare(o) > 0; }
  bool operator>=(const RadixRational& o) const { return compare(o) >= 0; }

  // Text triple "base:exponent:numerator" with a hexadecimal numerator;
  // round-trips exactly.
  std::string to_triple() const;
  static RadixRational parse_triple(const std::string& text);

private:
  struct no_normalize_tag {};
  RadixRational(unsigned base, BigInt numerator, std::int64_t exponent, no_normalize_tag)
      : base_(base), num_(std::move(numerator)), exp_(exponent) {}

  void normalize();

  unsigned base_;
  BigInt num_;
  std::int64_t exp_;
};

// Verdict of a certified comparison: pass / fail are proven, indeterminate
// means the certified interval straddles the threshold (ties included).
enum class Verdict { pass, fail, indeterminate };

const char* to_string(Verdict v);

// Certify the claim  x < num/den  for a real x known to lie in
// [lower, upper] (exact radix-rational endpoints, den > 0).
Verdict certify_less_than_fraction(const RadixRational& lower, const RadixRational& upper,
                                   const BigInt& num, const BigInt& den);

// Certify the claim  x > num/den  on the same terms.
Verdict certify_greater_than_fraction(const RadixRational& lower, const RadixRational& upper,
                                      const BigInt& num, const BigInt& den);

} // namespace welldist

#endif // WELLDIST_RADIX_HPP
