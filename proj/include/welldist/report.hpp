#ifndef WELLDIST_REPORT_HPP
#define WELLDIST_REPORT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <welldist/analysis.hpp>
#include <welldist/construction.hpp>
#include <welldist/distribution.hpp>

namespace welldist {

struct ReportOptions {
  std::uint64_t h_max = 16;
  std::uint64_t unshifted_N = 10000;
  std::uint64_t random_shifts = 0; // extra sampled shifts in the profile
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct ReportOutcome {
  bool partial = false;     // state incomplete or synthetic
  std::uint64_t fails = 0;  // failed dist/pointwise/sandwich checks
  std::uint64_t indeterminate = 0;
  bool all_pass() const { return fails == 0 && indeterminate == 0; }
};

// Writes the full bundle into out_dir: stages.csv, liouville.csv,
// verification.json, profile.csv, windows.csv, scatter.svg, manifest.json.
// Deterministic for a fixed state, options and seed.
ReportOutcome write_report_bundle(const ConstructionState& state, const ReportOptions& options,
                                  const std::string& out_dir);

// %.17g rendering used by every CSV/JSON emitter (round-trips doubles).
std::string format_double(double x);

} // namespace welldist

#endif // WELLDIST_REPORT_HPP
