#ifndef WELLDIST_PRIME_ENGINE_HPP
#define WELLDIST_PRIME_ENGINE_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include <welldist/errors.hpp>

namespace welldist {

// Indexed primes 2 = p_1 < p_2 < ... <= limit.  Immutable once built.
class PrimeTable {
public:
  PrimeTable() = default;
  PrimeTable(std::uint64_t limit, std::vector<std::uint64_t> primes)
      : limit_(limit), primes_(std::move(primes)) {}

  std::uint64_t limit() const { return limit_; }
  std::uint64_t count() const { return primes_.size(); }

  // 1-based: nth_prime(1) = 2.
  std::uint64_t nth_prime(std::uint64_t n) const;

  // Inverse of nth_prime; throws index_error if p is not a listed prime.
  std::uint64_t prime_index(std::uint64_t p) const;

  bool is_prime(std::uint64_t x) const;

  const std::vector<std::uint64_t>& primes() const { return primes_; }

private:
  std::uint64_t limit_ = 0;
  std::vector<std::uint64_t> primes_;
};

// All primes <= limit.  `memory_cap` bounds the in-memory sieve size; larger
// limits must go through segments.
PrimeTable sieve(std::uint64_t limit, std::uint64_t memory_cap = 100'000'000ull);

// Primality over [lo, hi), held as an odds-only bitmap.
class Segment {
public:
  Segment(std::uint64_t lo, std::uint64_t hi, std::vector<std::uint64_t> odd_bits)
      : lo_(lo), hi_(hi), bits_(std::move(odd_bits)) {}

  std::uint64_t lo() const { return lo_; }
  std::uint64_t hi() const { return hi_; }

  bool contains_prime(std::uint64_t x) const;
  std::vector<std::uint64_t> primes() const;
  void for_each_prime(const std::function<void(std::uint64_t)>& fn) const;

private:
  std::uint64_t lo_, hi_;
  std::vector<std::uint64_t> bits_; // bit i: lo_odd + 2i is prime
};

// Exact primality over [lo, hi); requires base_primes.limit()^2 >= hi.
Segment sieve_segment(std::uint64_t lo, std::uint64_t hi, const PrimeTable& base_primes);

// Upper bound on the n-th prime (Rosser-type), safe for table sizing.
std::uint64_t nth_prime_upper_bound(std::uint64_t n);

/*
 * Ascending stream of primes up to max_prime, generated segment by segment
 * so the global prime index stays continuous.  With threads > 1 the next
 * segment is sieved in the background while the current one is consumed;
 * consumption order (and thus every result built on it) is unchanged.
 */
class SegmentedPrimeStream {
public:
  explicit SegmentedPrimeStream(std::uint64_t max_prime, unsigned threads = 1,
                                std::uint64_t segment_size = 1u << 22);
  ~SegmentedPrimeStream();

  SegmentedPrimeStream(const SegmentedPrimeStream&) = delete;
  SegmentedPrimeStream& operator=(const SegmentedPrimeStream&) = delete;

  // Next prime, or nullopt past max_prime.
  std::optional<std::uint64_t> next();

  std::uint64_t max_prime() const { return max_prime_; }

private:
  void start_fill(std::uint64_t lo);
  struct Prefetch;

  std::uint64_t max_prime_;
  std::uint64_t segment_size_;
  unsigned threads_;
  PrimeTable base_;
  std::vector<std::uint64_t> buffer_;
  std::size_t pos_ = 0;
  std::uint64_t next_lo_ = 2;
  bool exhausted_ = false;
  std::unique_ptr<Prefetch> prefetch_;
};

} // namespace welldist

#endif // WELLDIST_PRIME_ENGINE_HPP
