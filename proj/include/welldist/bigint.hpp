#ifndef WELLDIST_BIGINT_HPP
#define WELLDIST_BIGINT_HPP

#include <cstdint>
#include <boost/multiprecision/cpp_int.hpp>

namespace welldist {

using BigInt = boost::multiprecision::cpp_int;

// Number of bits in |x|; bit_length(0) = 0.
inline std::int64_t bit_length(const BigInt& x) {
  if (x == 0) return 0;
  return static_cast<std::int64_t>(boost::multiprecision::msb(boost::multiprecision::abs(x))) + 1;
}

// Smallest e with 2^e >= x, for x >= 1.
inline std::int64_t ceil_log2(const BigInt& x) {
  if (x <= 1) return 0;
  std::int64_t bits = bit_length(x);
  BigInt p = BigInt(1) << static_cast<unsigned>(bits - 1);
  return (x == p) ? bits - 1 : bits;
}

inline BigInt pow_int(const BigInt& b, std::uint64_t e) {
  BigInt r = 1, base = b;
  while (e) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

} // namespace welldist

#endif // WELLDIST_BIGINT_HPP
