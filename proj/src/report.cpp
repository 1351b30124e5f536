#include <welldist/report.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include <json.hpp>

namespace welldist {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open " + path + " for writing");
  return out;
}

PrimeTable table_for_indices(std::uint64_t max_index, unsigned /*threads*/) {
  return sieve(nth_prime_upper_bound(max_index + 8));
}

json check_to_json(const DistanceCheck& c, double bound) {
  json j;
  j["i"] = c.i;
  j["prime"] = c.prime;
  j["value"] = format_double(c.value);
  j["bound"] = format_double(bound);
  j["upper_exact"] = c.upper.to_triple();
  j["verdict"] = to_string(c.verdict);
  return j;
}

void tally(ReportOutcome& out, Verdict v) {
  if (v == Verdict::fail) ++out.fails;
  if (v == Verdict::indeterminate) ++out.indeterminate;
}

void write_scatter_svg(const std::string& path, const ConstructionState& state,
                       const PrimeAccess& access, std::uint64_t unshifted_N) {
  const int width = 840, height = 120 + 60 * static_cast<int>(state.stage_count());
  std::ofstream out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  out << "<style>text{font:12px monospace;}</style>\n";

  const auto draw_row = [&](int y, const std::string& label, const std::vector<double>& pts) {
    out << "<text x=\"8\" y=\"" << (y - 14) << "\">" << label << "</text>\n";
    out << "<line x1=\"20\" y1=\"" << y << "\" x2=\"" << (width - 20) << "\" y2=\"" << y
        << "\" stroke=\"#999\" stroke-width=\"1\"/>\n";
    for (double p : pts) {
      const double x = 20.0 + p * (width - 40);
      char buf[96];
      std::snprintf(buf, sizeof(buf), "<circle cx=\"%.2f\" cy=\"%d\" r=\"2.2\"/>\n", x, y);
      out << buf;
    }
  };

  const std::uint64_t shown = std::min<std::uint64_t>(unshifted_N, 400);
  const auto base_phases = window_phases(state.alpha, 1, 0, shown, access);
  std::vector<double> base_pts;
  for (const auto& f : base_phases) base_pts.push_back(f.value >= 1.0 ? f.value - 1.0 : f.value);
  draw_row(60, "shift 0, first " + std::to_string(shown) + " primes", base_pts);

  int y = 120;
  for (const StageRecord& s : state.stages) {
    if (!s.run || s.run->primes.empty()) continue;
    const auto phases = window_phases(state.alpha, 1, s.m, s.r, access);
    std::vector<double> pts;
    for (const auto& f : phases) pts.push_back(f.value >= 1.0 ? f.value - 1.0 : f.value);
    draw_row(y, "shift m_" + std::to_string(s.k) + " = " + std::to_string(s.m) + ", run of " +
                    std::to_string(s.r),
             pts);
    y += 60;
  }
  out << "</svg>\n";
}

} // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

ReportOutcome write_report_bundle(const ConstructionState& state, const ReportOptions& options,
                                  const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const auto path = [&](const char* name) { return (fs::path(out_dir) / name).string(); };

  ReportOutcome outcome;
  outcome.partial = !state.complete || state.synthetic;

  // (i) stage table
  {
    std::ofstream out = open_out(path("stages.csv"));
    out << "k,n,j,r,m,pi,first_prime,last_prime\n";
    for (const StageRecord& s : state.stages) {
      out << s.k << ',' << s.n << ',' << s.j << ',' << s.r << ',' << s.m << ',' << s.pi.str()
          << ',' << (s.run ? std::to_string(s.run->first_prime) : "") << ','
          << (s.run ? std::to_string(s.run->last_prime) : "") << "\n";
    }
  }

  std::vector<std::string> files{"stages.csv"};

  // (ii) scaled-gap table (informational: verdicts reported, not gated)
  bool have_tail = true;
  try {
    tail_bound_of(state);
  } catch (const tail_bound_unavailable&) {
    have_tail = false;
  }
  if (have_tail && !state.stages.empty()) {
    files.push_back("liouville.csv");
    std::ofstream out = open_out(path("liouville.csv"));
    out << "k,n,coprime,gap_lower,gap_upper,gap_upper_exact,threshold_exact,verdict\n";
    for (const LiouvilleRecord& rec : liouville_records(state)) {
      out << rec.k << ',' << state.stages[rec.k].n << ',' << (rec.coprime ? 1 : 0) << ','
          << format_double(rec.gap_lower.to_float().value) << ','
          << format_double(rec.gap_upper.to_float().value) << ',' << rec.gap_upper.to_triple()
          << ',' << rec.threshold.to_triple() << ',' << to_string(rec.verdict) << "\n";
    }
  }

  // prime coverage: run members come from the state; the table serves the
  // unshifted windows
  PrimeTable table = table_for_indices(options.unshifted_N + 16, options.threads);
  PrimeAccess access(table, state);

  // (iii) certified verification for h = 1..h_max
  json verification;
  verification["seed"] = options.seed;
  verification["h_max"] = options.h_max;
  verification["partial"] = outcome.partial;
  json results = json::array();
  if (have_tail) {
    for (std::uint64_t h = 1; h <= options.h_max; ++h) {
      for (std::uint64_t k = 0; k < state.stage_count(); ++k) {
        const StageRecord& s = state.stage(k);
        if (!s.run || s.run->primes.size() < s.r) continue;
        json entry;
        entry["h"] = h;
        entry["k"] = k;

        const DistanceReport dist = verify_run_distance(state, h, k);
        json dj = json::array();
        for (const auto& c : dist.checks) {
          dj.push_back(check_to_json(c, dist.bound));
          tally(outcome, c.verdict);
        }
        entry["distance"] = {{"checks", std::move(dj)}, {"all_pass", dist.all_pass}};

        const DistanceReport pw = verify_pointwise(state, h, k);
        json pj = json::array();
        for (const auto& c : pw.checks) {
          pj.push_back(check_to_json(c, pw.bound));
          tally(outcome, c.verdict);
        }
        entry["pointwise"] = {{"checks", std::move(pj)}, {"all_pass", pw.all_pass}};

        json sj = json::array();
        for (std::uint64_t N = 1; N <= s.r; ++N) {
          const SandwichReport sw = verify_sandwich(state, h, k, N, access);
          tally(outcome, sw.verdict);
          sj.push_back({{"N", N},
                        {"magnitude", format_double(sw.magnitude)},
                        {"error_bound", format_double(sw.error_bound)},
                        {"lower_threshold", format_double(sw.lower_threshold)},
                        {"verdict", to_string(sw.verdict)}});
        }
        entry["sandwich"] = std::move(sj);
        results.push_back(std::move(entry));
      }
    }
  }
  verification["results"] = std::move(results);
  verification["summary"] = {{"fails", outcome.fails},
                             {"indeterminate", outcome.indeterminate},
                             {"all_pass", outcome.all_pass()}};
  {
    std::ofstream out = open_out(path("verification.json"));
    out << verification.dump(2) << "\n";
  }

  const RadixRational tail =
      have_tail ? tail_bound_of(state) : RadixRational(state.base, 0, 0);

  // (iv) sum-magnitude profile: decay at shift 0 versus the constructed shifts
  {
    std::ofstream out = open_out(path("profile.csv"));
    out << "series,h,N,best_shift,magnitude,error_bound\n";
    std::vector<std::uint64_t> zero_shifts{0};
    if (options.random_shifts > 0) {
      std::mt19937_64 rng(options.seed);
      std::uniform_int_distribution<std::uint64_t> dist(0, options.unshifted_N / 2);
      for (std::uint64_t i = 0; i < options.random_shifts; ++i) zero_shifts.push_back(dist(rng));
    }
    std::vector<std::uint64_t> n_list;
    for (std::uint64_t n = 1; n <= options.unshifted_N; n *= 10) {
      n_list.push_back(n);
      if (3 * n <= options.unshifted_N) n_list.push_back(3 * n);
    }
    for (const ProfileRow& row :
         shift_profile(1, state.alpha, tail, access, n_list, zero_shifts)) {
      out << "zero,1," << row.N << ',' << row.best_shift << ',' << format_double(row.magnitude)
          << ',' << format_double(row.error_bound) << "\n";
    }
    std::vector<std::uint64_t> built_shifts;
    std::uint64_t r_min = 0;
    for (const StageRecord& s : state.stages) {
      if (!s.run || s.run->primes.empty()) continue;
      built_shifts.push_back(s.m);
      r_min = r_min == 0 ? s.r : std::min(r_min, s.r);
    }
    if (!built_shifts.empty()) {
      std::vector<std::uint64_t> rn;
      for (std::uint64_t n = 1; n <= r_min; ++n) rn.push_back(n);
      for (const ProfileRow& row :
           shift_profile(1, state.alpha, tail, access, rn, built_shifts)) {
        out << "constructed,1," << row.N << ',' << row.best_shift << ','
            << format_double(row.magnitude) << ',' << format_double(row.error_bound) << "\n";
      }
    }
  }

  // (v) window discrepancies: the unshifted window against every stage window
  {
    std::ofstream out = open_out(path("windows.csv"));
    out << "m,N,h,d_star,argmax\n";
    std::vector<std::pair<std::uint64_t, std::uint64_t>> windows{{0, options.unshifted_N}};
    for (const StageRecord& s : state.stages)
      if (s.run && !s.run->primes.empty()) windows.push_back({s.m, s.r});
    for (const DiscrepancyReport& rep : window_profile(state.alpha, 1, access, windows)) {
      out << rep.m << ',' << rep.N << ',' << rep.h << ',' << format_double(rep.d_star) << ','
          << format_double(rep.argmax_location) << "\n";
    }
  }

  // (vi) scatter
  write_scatter_svg(path("scatter.svg"), state, access, options.unshifted_N);

  json manifest;
  manifest["seed"] = options.seed;
  manifest["threads"] = options.threads;
  manifest["partial"] = outcome.partial;
  manifest["synthetic"] = state.synthetic;
  manifest["complete"] = state.complete;
  manifest["fails"] = outcome.fails;
  manifest["indeterminate"] = outcome.indeterminate;
  files.insert(files.end(),
               {"verification.json", "profile.csv", "windows.csv", "scatter.svg", "manifest.json"});
  manifest["files"] = files;
  if (state.frontier) {
    manifest["frontier"] = {{"scanned_prime", state.frontier->scanned_prime},
                            {"scanned_index", state.frontier->scanned_index},
                            {"reason", state.frontier->reason}};
  }
  {
    std::ofstream out = open_out(path("manifest.json"));
    out << manifest.dump(2) << "\n";
  }
  return outcome;
}

} // namespace welldist
