#include <welldist/distribution.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace welldist {

PointSet::PointSet(std::vector<double> points) : points_(std::move(points)) {
  for (double x : points_) {
    if (!(x >= 0.0 && x < 1.0))
      throw contract_violation("PointSet: value " + std::to_string(x) + " outside [0, 1)");
  }
  std::sort(points_.begin(), points_.end());
}

std::uint64_t interval_count(const PointSet& ps, double a, double b) {
  if (!(a >= 0.0 && a < b && b <= 1.0))
    throw contract_violation("interval_count: need 0 <= a < b <= 1");
  const auto& x = ps.points();
  const auto lo = std::lower_bound(x.begin(), x.end(), a);
  const auto hi = std::upper_bound(x.begin(), x.end(), b);
  return static_cast<std::uint64_t>(hi - lo);
}

DiscrepancyReport star_discrepancy(const PointSet& ps) {
  const std::uint64_t N = ps.size();
  if (N == 0) throw contract_violation("star_discrepancy: empty point set");
  const auto& x = ps.points();
  const double Nd = static_cast<double>(N);
  DiscrepancyReport rep;
  rep.N = N;
  for (std::uint64_t i = 1; i <= N; ++i) {
    const double xi = x[i - 1];
    const double up = static_cast<double>(i) / Nd - xi;
    const double down = xi - static_cast<double>(i - 1) / Nd;
    const double d = std::max(up, down);
    if (d > rep.d_star) {
      rep.d_star = d;
      rep.argmax_location = xi;
    }
  }
  return rep;
}

std::vector<DiscrepancyReport> window_profile(
    const RadixRational& alpha, std::uint64_t h, const PrimeAccess& primes,
    const std::vector<std::pair<std::uint64_t, std::uint64_t>>& windows) {
  std::vector<DiscrepancyReport> out;
  for (const auto& [m, N] : windows) {
    const auto phases = window_phases(alpha, h, m, N, primes);
    std::vector<double> pts;
    pts.reserve(phases.size());
    for (const FloatWithError& f : phases) {
      double v = f.value;
      if (v >= 1.0) v -= 1.0; // exact phases are < 1; rounding may land on 1.0
      pts.push_back(v);
    }
    DiscrepancyReport rep = star_discrepancy(PointSet(std::move(pts)));
    rep.h = h;
    rep.m = m;
    out.push_back(rep);
  }
  return out;
}

} // namespace welldist
