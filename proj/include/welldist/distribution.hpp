#ifndef WELLDIST_DISTRIBUTION_HPP
#define WELLDIST_DISTRIBUTION_HPP

#include <cstdint>
#include <vector>

#include <welldist/analysis.hpp>
#include <welldist/radix.hpp>

namespace welldist {

// Finite multiset of points in [0, 1), kept sorted.
class PointSet {
public:
  explicit PointSet(std::vector<double> points);

  std::uint64_t size() const { return points_.size(); }
  const std::vector<double>& points() const { return points_; }

private:
  std::vector<double> points_;
};

// Points in the closed interval [a, b]; requires 0 <= a < b <= 1.
std::uint64_t interval_count(const PointSet& ps, double a, double b);

struct DiscrepancyReport {
  std::uint64_t N = 0;
  double d_star = 0.0;
  double argmax_location = 0.0; // sorted point where the deviation peaks
  // window descriptor (meaningful for window_profile results)
  std::uint64_t h = 0;
  std::uint64_t m = 0;
};

// Exact star discrepancy of a nonempty set via the sorted-points formula
//   D*_N = max_i max(i/N - x_(i), x_(i) - (i-1)/N).
DiscrepancyReport star_discrepancy(const PointSet& ps);

// One report per window (m, N): the star discrepancy of the phases
// {h * alpha * p_{m+n}}, n = 1..N.  Phases are exact up to one float
// rounding each, so d_star carries at most ~N ulp of rounding noise.
std::vector<DiscrepancyReport> window_profile(const RadixRational& alpha, std::uint64_t h,
                                              const PrimeAccess& primes,
                                              const std::vector<std::pair<std::uint64_t, std::uint64_t>>& windows);

} // namespace welldist

#endif // WELLDIST_DISTRIBUTION_HPP
