#include <welldist/prime_engine.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <future>
#include <memory>
#include <string>

namespace welldist {

namespace {

// Odds-only bit sieve over [lo, hi); bit i stands for first_odd + 2i.
// Assumes every prime factor <= sqrt(hi) is in base.
std::vector<std::uint64_t> sieve_odd_bits(std::uint64_t lo, std::uint64_t hi,
                                          const std::vector<std::uint64_t>& base) {
  const std::uint64_t first_odd = lo | 1;
  const std::uint64_t n_odds = first_odd >= hi ? 0 : (hi - first_odd + 1) / 2;
  std::vector<std::uint64_t> bits((n_odds + 63) / 64, ~0ull);
  for (std::uint64_t p : base) {
    if (p == 2) continue;
    if (p * p >= hi) break;
    std::uint64_t start = std::max(p * p, ((lo + p - 1) / p) * p);
    if ((start & 1) == 0) start += p;
    for (std::uint64_t m = start; m < hi; m += 2 * p) {
      const std::uint64_t i = (m - first_odd) / 2;
      bits[i >> 6] &= ~(1ull << (i & 63));
    }
  }
  // mask out 1 and anything past hi
  if (lo <= 1 && n_odds > 0 && first_odd == 1) bits[0] &= ~1ull;
  const std::uint64_t tail = n_odds % 64;
  if (!bits.empty() && tail != 0) bits.back() &= (~0ull) >> (64 - tail);
  return bits;
}

void collect_from_bits(std::uint64_t lo, std::uint64_t hi,
                       const std::vector<std::uint64_t>& bits,
                       std::vector<std::uint64_t>& out) {
  const std::uint64_t first_odd = lo | 1;
  if (lo <= 2 && hi > 2) out.push_back(2);
  for (std::size_t w = 0; w < bits.size(); ++w) {
    std::uint64_t word = bits[w];
    while (word) {
      const int b = std::countr_zero(word);
      word &= word - 1;
      out.push_back(first_odd + 2 * (64 * w + static_cast<std::uint64_t>(b)));
    }
  }
}

} // namespace

std::uint64_t PrimeTable::nth_prime(std::uint64_t n) const {
  if (n < 1 || n > primes_.size())
    throw index_error("nth_prime: n = " + std::to_string(n) + " outside [1, " +
                      std::to_string(primes_.size()) + "]");
  return primes_[n - 1];
}

std::uint64_t PrimeTable::prime_index(std::uint64_t p) const {
  const auto it = std::lower_bound(primes_.begin(), primes_.end(), p);
  if (it == primes_.end() || *it != p)
    throw index_error("prime_index: " + std::to_string(p) + " is not a prime in this table");
  return static_cast<std::uint64_t>(it - primes_.begin()) + 1;
}

bool PrimeTable::is_prime(std::uint64_t x) const {
  if (x > limit_)
    throw index_error("is_prime: " + std::to_string(x) + " exceeds table limit " +
                      std::to_string(limit_));
  return std::binary_search(primes_.begin(), primes_.end(), x);
}

PrimeTable sieve(std::uint64_t limit, std::uint64_t memory_cap) {
  if (limit < 2) throw contract_violation("sieve: limit must be >= 2");
  if (limit > memory_cap)
    throw resource_error("sieve: limit " + std::to_string(limit) +
                         " exceeds the in-memory cap (" + std::to_string(memory_cap) +
                         "); use sieve_segment / SegmentedPrimeStream instead");
  // small base sieve up to sqrt(limit)
  const std::uint64_t root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit))) + 2;
  std::vector<bool> small(root + 1, true);
  std::vector<std::uint64_t> base;
  for (std::uint64_t i = 2; i <= root; ++i) {
    if (!small[i]) continue;
    base.push_back(i);
    for (std::uint64_t j = i * i; j <= root; j += i) small[j] = false;
  }
  std::vector<std::uint64_t> primes;
  primes.reserve(static_cast<std::size_t>(
      limit > 100 ? 1.2 * static_cast<double>(limit) / std::log(static_cast<double>(limit)) : 32));
  const auto bits = sieve_odd_bits(2, limit + 1, base);
  collect_from_bits(2, limit + 1, bits, primes);
  return PrimeTable(limit, std::move(primes));
}

bool Segment::contains_prime(std::uint64_t x) const {
  if (x < lo_ || x >= hi_) return false;
  if (x == 2) return true;
  if ((x & 1) == 0) return false;
  const std::uint64_t first_odd = lo_ | 1;
  const std::uint64_t i = (x - first_odd) / 2;
  return (bits_[i >> 6] >> (i & 63)) & 1;
}

std::vector<std::uint64_t> Segment::primes() const {
  std::vector<std::uint64_t> out;
  collect_from_bits(lo_, hi_, bits_, out);
  return out;
}

void Segment::for_each_prime(const std::function<void(std::uint64_t)>& fn) const {
  for (std::uint64_t p : primes()) fn(p);
}

Segment sieve_segment(std::uint64_t lo, std::uint64_t hi, const PrimeTable& base_primes) {
  if (lo < 2) throw contract_violation("sieve_segment: lo must be >= 2");
  if (lo > hi) throw contract_violation("sieve_segment: lo > hi");
  if (hi > 0 && base_primes.limit() * base_primes.limit() < hi)
    throw contract_violation("sieve_segment: base primes cover " +
                             std::to_string(base_primes.limit()) + "^2 < hi = " +
                             std::to_string(hi));
  return Segment(lo, hi, sieve_odd_bits(lo, hi, base_primes.primes()));
}

std::uint64_t nth_prime_upper_bound(std::uint64_t n) {
  if (n < 6) return 15;
  const double nd = static_cast<double>(n);
  return static_cast<std::uint64_t>(nd * (std::log(nd) + std::log(std::log(nd)))) + 2;
}

struct SegmentedPrimeStream::Prefetch {
  std::future<std::vector<std::uint64_t>> pending;
  std::uint64_t pending_lo = 0, pending_hi = 0;
};

SegmentedPrimeStream::SegmentedPrimeStream(std::uint64_t max_prime, unsigned threads,
                                           std::uint64_t segment_size)
    : max_prime_(max_prime), segment_size_(std::max<std::uint64_t>(segment_size, 1u << 16)),
      threads_(threads == 0 ? 1 : threads), prefetch_(std::make_unique<Prefetch>()) {
  if (max_prime < 2) throw contract_violation("SegmentedPrimeStream: max_prime must be >= 2");
  const std::uint64_t root =
      static_cast<std::uint64_t>(std::sqrt(static_cast<double>(max_prime))) + 2;
  base_ = sieve(std::max<std::uint64_t>(root, 4), UINT64_MAX);
}

SegmentedPrimeStream::~SegmentedPrimeStream() {
  if (prefetch_->pending.valid()) prefetch_->pending.wait();
}

void SegmentedPrimeStream::start_fill(std::uint64_t lo) {
  const std::uint64_t hi = std::min(max_prime_ + 1, lo + segment_size_);
  prefetch_->pending_lo = lo;
  prefetch_->pending_hi = hi;
  const auto work = [this, lo, hi]() {
    std::vector<std::uint64_t> out;
    const auto bits = sieve_odd_bits(lo, hi, base_.primes());
    collect_from_bits(lo, hi, bits, out);
    return out;
  };
  if (threads_ > 1) {
    prefetch_->pending = std::async(std::launch::async, work);
  } else {
    std::promise<std::vector<std::uint64_t>> ready;
    ready.set_value(work());
    prefetch_->pending = ready.get_future();
  }
}

std::optional<std::uint64_t> SegmentedPrimeStream::next() {
  while (pos_ >= buffer_.size()) {
    if (exhausted_) return std::nullopt;
    if (!prefetch_->pending.valid()) {
      if (next_lo_ > max_prime_) {
        exhausted_ = true;
        return std::nullopt;
      }
      start_fill(next_lo_);
    }
    buffer_ = prefetch_->pending.get();
    pos_ = 0;
    next_lo_ = prefetch_->pending_hi;
    if (next_lo_ > max_prime_) {
      exhausted_ = true;
    } else {
      start_fill(next_lo_); // overlap next segment with consumption
    }
  }
  return buffer_[pos_++];
}

} // namespace welldist
