#include <welldist/radix.hpp>

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

namespace welldist {

namespace {

namespace mp = boost::multiprecision;

// Correctly rounded double from a non-negative integer of at most 64 bits.
// Split into two 32-bit halves so the final addition performs the single
// IEEE rounding.
double double_from_u64_bits(const BigInt& q) {
  const std::uint64_t v = q.convert_to<std::uint64_t>();
  const double hi = static_cast<double>(v >> 32);
  const double lo = static_cast<double>(v & 0xffffffffu);
  return hi * 4294967296.0 + lo;
}

} // namespace

void RadixRational::normalize() {
  if (num_ == 0) {
    exp_ = 0;
    return;
  }
  if (exp_ == 0) return;
  if (base_ == 2) {
    const std::int64_t tz = static_cast<std::int64_t>(mp::lsb(mp::abs(num_)));
    const std::int64_t s = std::min(tz, exp_);
    if (s > 0) {
      num_ >>= static_cast<unsigned>(s);
      exp_ -= s;
    }
    return;
  }
  BigInt q, r;
  while (exp_ > 0) {
    mp::divide_qr(num_, BigInt(base_), q, r);
    if (r != 0) break;
    num_ = q;
    --exp_;
  }
}

RadixRational RadixRational::from_double(double d) {
  if (!std::isfinite(d)) throw contract_violation("from_double: value not finite");
  int e = 0;
  const double m = std::frexp(d, &e); // d = m * 2^e, |m| in [0.5, 1)
  const double scaled = std::ldexp(m, 53);
  BigInt num(scaled); // integral by construction
  const std::int64_t shift = static_cast<std::int64_t>(e) - 53;
  if (shift >= 0) return RadixRational(2, num << static_cast<unsigned>(shift), 0);
  return RadixRational(2, std::move(num), -shift);
}

RadixRational RadixRational::add(const RadixRational& other) const {
  if (base_ != other.base_)
    throw contract_violation("add: base mismatch (" + std::to_string(base_) + " vs " +
                             std::to_string(other.base_) + ")");
  const std::int64_t e = std::max(exp_, other.exp_);
  BigInt a = num_ * pow_int(base_, static_cast<std::uint64_t>(e - exp_));
  BigInt b = other.num_ * pow_int(base_, static_cast<std::uint64_t>(e - other.exp_));
  return RadixRational(base_, a + b, e);
}

RadixRational RadixRational::mul_int(const BigInt& c) const {
  return RadixRational(base_, num_ * c, exp_);
}

RadixRational RadixRational::mul_base_pow(std::int64_t j) const {
  if (j == 0 || num_ == 0) return *this;
  if (j < 0) {
    if (exp_ > INT64_MAX + j) throw contract_violation("mul_base_pow: exponent overflow");
    return RadixRational(base_, num_, exp_ - j);
  }
  if (j >= exp_) {
    return RadixRational(base_, num_ * pow_int(base_, static_cast<std::uint64_t>(j - exp_)), 0);
  }
  return RadixRational(base_, num_, exp_ - j, no_normalize_tag{}); // base does not divide num_
}

BigInt RadixRational::floor_value() const {
  if (exp_ == 0) return num_;
  const BigInt den = pow_int(base_, static_cast<std::uint64_t>(exp_));
  BigInt q, r;
  mp::divide_qr(num_, den, q, r);
  if (r < 0) --q;
  return q;
}

RadixRational RadixRational::frac() const {
  if (exp_ == 0) return RadixRational(base_, 0, 0);
  const BigInt den = pow_int(base_, static_cast<std::uint64_t>(exp_));
  BigInt r = num_ % den;
  if (r < 0) r += den;
  return RadixRational(base_, std::move(r), exp_);
}

RadixRational RadixRational::dist_to_nearest_int() const {
  RadixRational f = frac();
  if (f.num_ == 0) return f;
  // compare f with 1/2 exactly: 2*num vs base^exp
  const BigInt den = pow_int(base_, static_cast<std::uint64_t>(f.exp_));
  if (2 * f.num_ <= den) return f;
  return RadixRational(base_, den - f.num_, f.exp_);
}

FloatWithError RadixRational::to_float() const {
  if (num_ == 0) return {0.0, 0.0};
  const bool negative = num_ < 0;
  const BigInt mag = mp::abs(num_);
  const BigInt den = pow_int(base_, static_cast<std::uint64_t>(exp_));

  // Scale so the truncated quotient keeps >= 63 significant bits, then keep
  // exactly a 64-bit window.  One truncation (tracked by `sticky`), one IEEE
  // rounding in the 64-bit-to-double conversion, and one possibly-rounding
  // ldexp; together < 1 ulp of the result, and exactness is detected by
  // round-tripping.
  const std::int64_t abits = bit_length(mag);
  const std::int64_t dbits = bit_length(den);
  const std::int64_t shift = std::max<std::int64_t>(0, 64 - (abits - dbits));
  BigInt q, r;
  mp::divide_qr(mag << static_cast<unsigned>(shift), den, q, r);
  bool sticky = (r != 0);

  std::int64_t qbits = bit_length(q);
  std::int64_t drop = std::max<std::int64_t>(0, qbits - 64);
  if (drop > 0) {
    if (mp::lsb(q) < static_cast<unsigned>(drop)) sticky = true;
    q >>= static_cast<unsigned>(drop);
  }
  const std::int64_t result_exp2 = (qbits - 1) - shift; // floor(log2 |value|)
  if (result_exp2 > 1024) throw float_overflow_error("to_float: value exceeds double range");

  const double qd = double_from_u64_bits(q);
  const std::int64_t e2 = drop - shift;
  if (e2 < INT_MIN || e2 > INT_MAX) throw contract_violation("to_float: scale out of range");
  const double v = std::ldexp(qd, static_cast<int>(e2));
  if (std::isinf(v)) throw float_overflow_error("to_float: value exceeds double range");

  const bool exact = !sticky && BigInt(qd) == q && std::ldexp(v, static_cast<int>(-e2)) == qd;
  double bound = 0.0;
  if (!exact) {
    const double av = std::fabs(v);
    bound = std::nextafter(av, std::numeric_limits<double>::infinity()) - av;
    if (!(bound > 0.0)) bound = std::numeric_limits<double>::denorm_min();
  }
  return {negative ? -v : v, bound};
}

double RadixRational::upper_double() const {
  const FloatWithError f = to_float();
  if (f.abs_error_bound == 0.0) return f.value;
  return std::nextafter(f.value + f.abs_error_bound, std::numeric_limits<double>::infinity());
}

double RadixRational::lower_double() const {
  const FloatWithError f = to_float();
  if (f.abs_error_bound == 0.0) return f.value;
  return std::nextafter(f.value - f.abs_error_bound, -std::numeric_limits<double>::infinity());
}

int RadixRational::compare(const RadixRational& other) const {
  if (base_ != other.base_) throw contract_violation("compare: base mismatch");
  const std::int64_t e = std::max(exp_, other.exp_);
  const BigInt a = num_ * pow_int(base_, static_cast<std::uint64_t>(e - exp_));
  const BigInt b = other.num_ * pow_int(base_, static_cast<std::uint64_t>(e - other.exp_));
  if (a < b) return -1;
  if (a > b) return 1;
  return 0;
}

std::string RadixRational::to_triple() const {
  std::ostringstream os;
  os << base_ << ':' << exp_ << ':';
  if (num_ < 0) os << '-';
  os << std::hex << mp::abs(num_);
  return os.str();
}

RadixRational RadixRational::parse_triple(const std::string& text) {
  const auto c1 = text.find(':');
  const auto c2 = text.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw contract_violation("parse_triple: expected base:exponent:numerator, got \"" + text + "\"");
  const std::string bs = text.substr(0, c1);
  const std::string es = text.substr(c1 + 1, c2 - c1 - 1);
  std::string ns = text.substr(c2 + 1);
  if (bs.empty() || es.empty() || ns.empty())
    throw contract_violation("parse_triple: empty field in \"" + text + "\"");
  try {
    const unsigned long base = std::stoul(bs);
    const long long exp = std::stoll(es);
    bool neg = false;
    if (ns[0] == '-') {
      neg = true;
      ns = ns.substr(1);
    }
    if (ns.find_first_not_of("0123456789abcdefABCDEF") != std::string::npos)
      throw contract_violation("parse_triple: bad hex numerator in \"" + text + "\"");
    BigInt num("0x" + ns);
    if (neg) num = -num;
    return RadixRational(static_cast<unsigned>(base), std::move(num), exp);
  } catch (const contract_violation&) {
    throw;
  } catch (const std::exception&) {
    throw contract_violation("parse_triple: malformed triple \"" + text + "\"");
  }
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    default: return "indeterminate";
  }
}

Verdict certify_less_than_fraction(const RadixRational& lower, const RadixRational& upper,
                                   const BigInt& num, const BigInt& den) {
  if (den <= 0) throw contract_violation("certify_less_than_fraction: denominator must be > 0");
  const BigInt up_scaled = upper.numerator() * den;
  const BigInt up_rhs = num * pow_int(upper.base(), static_cast<std::uint64_t>(upper.exponent()));
  if (up_scaled < up_rhs) return Verdict::pass;
  const BigInt lo_scaled = lower.numerator() * den;
  const BigInt lo_rhs = num * pow_int(lower.base(), static_cast<std::uint64_t>(lower.exponent()));
  if (lo_scaled >= lo_rhs) return Verdict::fail;
  return Verdict::indeterminate;
}

Verdict certify_greater_than_fraction(const RadixRational& lower, const RadixRational& upper,
                                      const BigInt& num, const BigInt& den) {
  if (den <= 0) throw contract_violation("certify_greater_than_fraction: denominator must be > 0");
  const BigInt lo_scaled = lower.numerator() * den;
  const BigInt lo_rhs = num * pow_int(lower.base(), static_cast<std::uint64_t>(lower.exponent()));
  if (lo_scaled > lo_rhs) return Verdict::pass;
  const BigInt up_scaled = upper.numerator() * den;
  const BigInt up_rhs = num * pow_int(upper.base(), static_cast<std::uint64_t>(upper.exponent()));
  if (up_scaled <= up_rhs) return Verdict::fail;
  return Verdict::indeterminate;
}

} // namespace welldist
