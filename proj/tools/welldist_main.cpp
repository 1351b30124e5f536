#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <welldist/analysis.hpp>
#include <welldist/construction.hpp>
#include <welldist/distribution.hpp>
#include <welldist/prime_engine.hpp>
#include <welldist/report.hpp>
#include <welldist/run_finder.hpp>
#include <welldist/state_io.hpp>

namespace {

using nlohmann::json;
using namespace welldist;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitVerifyFail = 2;

void write_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(b), 4);
}

void write_u64(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(b), 8);
}

int cmd_sieve(std::uint64_t limit, const std::string& out_path, const std::string& format) {
  const PrimeTable table = sieve(limit);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw io_error("cannot open " + out_path + " for writing");
  if (format == "csv") {
    out << "index,prime\n";
    std::uint64_t i = 1;
    for (std::uint64_t p : table.primes()) out << i++ << ',' << p << "\n";
  } else {
    out.write("WDPRIMES", 8);
    write_u32(out, 1);
    write_u64(out, table.limit());
    write_u64(out, table.count());
    for (std::uint64_t p : table.primes()) write_u64(out, p);
  }
  if (!out) throw io_error("failed writing " + out_path);
  std::cerr << "wrote " << table.count() << " primes <= " << limit << " to " << out_path << "\n";
  return kExitOk;
}

json run_line(const CongruentRun& r) {
  return json{{"m", r.m},
              {"k", r.k},
              {"q", r.q},
              {"a", r.a},
              {"first_prime", r.first_prime},
              {"last_prime", r.last_prime}};
}

int cmd_find_run(std::uint64_t k, std::uint64_t q, std::uint64_t a, std::uint64_t max_prime,
                 bool all, const std::string& out_path, unsigned threads) {
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!out_path.empty() && out_path != "-") {
    file.open(out_path, std::ios::binary);
    if (!file) throw io_error("cannot open " + out_path + " for writing");
    out = &file;
  }
  SearchBudget budget{max_prime, std::nullopt};
  if (all) {
    enumerate_runs(k, q, a, budget, [&](const CongruentRun& r) {
      *out << run_line(r).dump() << "\n";
      return true;
    }, threads);
    return kExitOk;
  }
  const FindResult r = find_first_run(k, q, a, budget, threads);
  if (r.found()) {
    *out << run_line(*r.run).dump() << "\n";
    return kExitOk;
  }
  std::cerr << json{{"not_found", true},
                    {"frontier_prime", r.frontier_prime},
                    {"frontier_index", r.frontier_index}}
                   .dump()
            << "\n";
  return kExitOk;
}

std::vector<BigInt> parse_digits(const std::string& text) {
  std::vector<BigInt> digits;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    digits.emplace_back(item);
  }
  if (digits.empty()) digits.emplace_back(1);
  return digits;
}

int cmd_build(const std::string& mode_name, std::uint64_t stages, std::uint64_t max_prime,
              std::uint64_t h_max, std::uint64_t ceiling, unsigned base,
              std::uint64_t run_length, unsigned modulus_exponent, const std::string& digits,
              const std::string& out_path, unsigned threads) {
  ConstructionParams params;
  params.mode = build_mode_from_string(mode_name);
  params.base = base;
  params.stages = stages;
  params.budget.max_prime = max_prime;
  params.h_max = h_max;
  params.exponent_ceiling = ceiling;
  params.threads = threads;
  params.preset_run_length = run_length;
  params.preset_modulus_exponent = modulus_exponent;
  if (params.mode == BuildMode::generalized) {
    const std::vector<BigInt> ds = parse_digits(digits);
    for (std::uint64_t k = 0; k <= stages; ++k) {
      StagePlan plan;
      plan.modulus_exponent = modulus_exponent;
      plan.run_length = run_length;
      plan.digit = ds[k % ds.size()];
      params.plans.push_back(std::move(plan));
    }
  }
  const ConstructionState state = build(params);
  save_state(state, out_path);
  std::cerr << "mode " << to_string(state.mode) << ": built " << state.stage_count()
            << " stage(s), " << (state.complete ? "complete" : "PARTIAL") << ", alpha = "
            << state.alpha.to_triple().substr(0, 64) << (state.alpha.to_triple().size() > 64 ? "..." : "")
            << "\n";
  if (state.frontier) std::cerr << "frontier: " << state.frontier->reason << "\n";
  return kExitOk;
}

// Prime coverage for arbitrary window queries: run members resolve through
// the state; anything else comes from a table sized to the largest index.
PrimeTable table_for_query(const ConstructionState& state, std::uint64_t shift, std::uint64_t N) {
  std::uint64_t need = 0;
  bool covered = false;
  for (const StageRecord& s : state.stages) {
    if (s.run && shift >= s.m && shift + N <= s.m + s.run->primes.size()) covered = true;
  }
  if (!covered) need = shift + N;
  if (need == 0) return sieve(16);
  const std::uint64_t limit = nth_prime_upper_bound(need + 8);
  if (limit > 400'000'000ull)
    throw resource_error("window (shift " + std::to_string(shift) + ", N " + std::to_string(N) +
                         ") needs primes past " + std::to_string(limit) +
                         "; choose a shift covered by the built runs or a smaller window");
  return sieve(limit, 400'000'000ull);
}

int cmd_weyl(const std::string& state_path, std::uint64_t h, std::uint64_t shift,
             std::uint64_t N, std::uint64_t seed) {
  const ConstructionState state = load_state(state_path);
  const PrimeTable table = table_for_query(state, shift, N);
  PrimeAccess access(table, state);
  RadixRational tail(state.base, 0, 0);
  try {
    tail = tail_bound_of(state);
  } catch (const tail_bound_unavailable&) {
  }
  WeylQuery q{h, N, shift, state.alpha, tail};
  const WeylResult w = weyl_sum(q, access);
  json j{{"h", h},
         {"N", N},
         {"shift", shift},
         {"sum_re", format_double(w.sum_re)},
         {"sum_im", format_double(w.sum_im)},
         {"magnitude", format_double(w.magnitude)},
         {"total_error_bound", format_double(w.total_error_bound)},
         {"seed", seed}};
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int verdict_exit(std::uint64_t fails, std::uint64_t indeterminate) {
  return (fails == 0 && indeterminate == 0) ? kExitOk : kExitVerifyFail;
}

int cmd_verify(const std::string& state_path, std::string lemma, std::uint64_t h,
               std::int64_t k_opt, std::int64_t N_opt, std::uint64_t seed) {
  if (lemma == "2.2") lemma = "dist";
  const ConstructionState state = load_state(state_path);
  json checks = json::array();
  std::uint64_t fails = 0, indeterminate = 0;
  const auto tally = [&](Verdict v) {
    if (v == Verdict::fail) ++fails;
    if (v == Verdict::indeterminate) ++indeterminate;
  };

  std::vector<std::uint64_t> ks;
  if (k_opt >= 0) {
    ks.push_back(static_cast<std::uint64_t>(k_opt));
  } else {
    for (std::uint64_t k = 0; k < state.stage_count(); ++k) ks.push_back(k);
  }

  if (lemma == "dist" || lemma == "pointwise") {
    for (std::uint64_t k : ks) {
      const DistanceReport rep = lemma == "dist" ? verify_run_distance(state, h, k)
                                                 : verify_pointwise(state, h, k);
      for (const DistanceCheck& c : rep.checks) {
        tally(c.verdict);
        checks.push_back(json{{"k", k},
                              {"i", c.i},
                              {"prime", c.prime},
                              {"value", format_double(c.value)},
                              {"bound", format_double(rep.bound)},
                              {"upper_exact", c.upper.to_triple()},
                              {"verdict", to_string(c.verdict)}});
      }
    }
  } else if (lemma == "sandwich") {
    PrimeAccess access(state);
    for (std::uint64_t k : ks) {
      const StageRecord& s = state.stage(k);
      std::vector<std::uint64_t> Ns;
      if (N_opt >= 0)
        Ns.push_back(static_cast<std::uint64_t>(N_opt));
      else
        for (std::uint64_t N = 1; N <= s.r; ++N) Ns.push_back(N);
      for (std::uint64_t N : Ns) {
        const SandwichReport sw = verify_sandwich(state, h, k, N, access);
        tally(sw.verdict);
        checks.push_back(json{{"k", k},
                              {"i", N},
                              {"value", format_double(sw.magnitude)},
                              {"error_bound", format_double(sw.error_bound)},
                              {"bound", format_double(sw.lower_threshold)},
                              {"verdict", to_string(sw.verdict)}});
      }
    }
  } else if (lemma == "liouville") {
    const auto records = liouville_records(state);
    for (const LiouvilleRecord& rec : records) {
      if (k_opt >= 0 && rec.k != static_cast<std::uint64_t>(k_opt)) continue;
      tally(rec.verdict);
      checks.push_back(json{{"k", rec.k},
                            {"i", rec.k},
                            {"coprime", rec.coprime},
                            {"value", format_double(rec.gap_upper.to_float().value)},
                            {"bound", format_double(rec.threshold.to_float().value)},
                            {"gap_upper_exact", rec.gap_upper.to_triple()},
                            {"threshold_exact", rec.threshold.to_triple()},
                            {"verdict", to_string(rec.verdict)}});
    }
  } else {
    throw contract_violation("unknown check family \"" + lemma +
                             "\"; expected dist|pointwise|sandwich|liouville");
  }

  json out{{"checks", std::move(checks)},
           {"summary",
            {{"family", lemma},
             {"h", h},
             {"fails", fails},
             {"indeterminate", indeterminate},
             {"all_pass", fails == 0 && indeterminate == 0},
             {"seed", seed}}}};
  std::cout << out.dump(2) << "\n";
  return verdict_exit(fails, indeterminate);
}

int cmd_discrepancy(const std::string& state_path, std::uint64_t h,
                    const std::string& windows_path, const std::string& out_path,
                    unsigned threads) {
  const ConstructionState state = load_state(state_path);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> windows;
  if (windows_path.empty()) {
    windows.push_back({0, 10000});
    for (const StageRecord& s : state.stages)
      if (s.run && !s.run->primes.empty()) windows.push_back({s.m, s.r});
  } else {
    std::ifstream in(windows_path);
    if (!in) throw io_error("cannot open " + windows_path);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw io_error(std::string("window file is not valid JSON: ") + e.what());
    }
    for (const json& w : j) {
      if (w.is_array())
        windows.push_back({w.at(0).get<std::uint64_t>(), w.at(1).get<std::uint64_t>()});
      else
        windows.push_back({w.at("m").get<std::uint64_t>(), w.at("N").get<std::uint64_t>()});
    }
  }
  std::uint64_t max_need = 0;
  for (const auto& [m, N] : windows) {
    bool covered = false;
    for (const StageRecord& s : state.stages)
      if (s.run && m >= s.m && m + N <= s.m + s.run->primes.size()) covered = true;
    if (!covered) max_need = std::max(max_need, m + N);
  }
  PrimeTable table = max_need ? sieve(nth_prime_upper_bound(max_need + 8)) : sieve(16);
  (void)threads;
  PrimeAccess access(table, state);

  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw io_error("cannot open " + out_path + " for writing");
  out << "m,N,d_star,argmax\n";
  for (const DiscrepancyReport& rep : window_profile(state.alpha, h, access, windows)) {
    out << rep.m << ',' << rep.N << ',' << format_double(rep.d_star) << ','
        << format_double(rep.argmax_location) << "\n";
  }
  return kExitOk;
}

int cmd_report(const std::string& state_path, std::uint64_t h_max, const std::string& out_dir,
               std::uint64_t random_shifts, std::uint64_t seed, unsigned threads) {
  const ConstructionState state = load_state(state_path);
  ReportOptions options;
  options.h_max = h_max;
  options.random_shifts = random_shifts;
  options.seed = seed;
  options.threads = threads;
  const ReportOutcome outcome = write_report_bundle(state, options, out_dir);
  if (outcome.partial)
    std::cerr << "PARTIAL: state is " << (state.synthetic ? "synthetic" : "incomplete")
              << "; report written for the available stages\n";
  std::cerr << "report written to " << out_dir << " (fails " << outcome.fails
            << ", indeterminate " << outcome.indeterminate << ")\n";
  return verdict_exit(outcome.fails, outcome.indeterminate);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"welldist: runs of congruent primes, exact digit constructions, and the"
               " exponential-sum / discrepancy measurements built on them"};
  app.set_help_flag("--help", "print help"); // keep --h free for frequencies
  app.set_config("--config", "", "key=value config file; flags take precedence");

  unsigned threads = 1;
  std::uint64_t seed = 0;
  app.add_option("--threads", threads, "worker threads for sieving")
      ->envname("WELLDIST_THREADS")
      ->check(CLI::Range(1u, 64u));
  app.add_option("--seed", seed, "seed for any randomized shift sampling");

  // sieve
  auto* sv = app.add_subcommand("sieve", "sieve primes up to a limit and write them out");
  std::uint64_t sv_limit = 0;
  std::string sv_out, sv_format = "bin";
  sv->add_option("--limit", sv_limit, "sieve bound (inclusive)")->required();
  sv->add_option("--out", sv_out, "output file")->required();
  sv->add_option("--format", sv_format, "bin | csv")->check(CLI::IsMember({"bin", "csv"}));

  // find-run
  auto* fr = app.add_subcommand("find-run", "search runs of congruent consecutive primes");
  std::uint64_t fr_k = 1, fr_q = 2, fr_a = 1, fr_max_prime = 1'000'000'000ull;
  bool fr_all = false;
  std::string fr_out;
  fr->add_option("-k,--k", fr_k, "run length")->required();
  fr->add_option("-q,--q", fr_q, "modulus")->required();
  fr->add_option("-a,--a", fr_a, "residue class")->required();
  fr->add_option("--max-prime", fr_max_prime, "scan budget");
  fr->add_flag("--all", fr_all, "emit every maximal run of length >= k");
  fr->add_option("--out", fr_out, "output file (default stdout)");

  // build
  auto* bd = app.add_subcommand("build", "build a staged digit construction");
  std::string bd_mode = "faithful", bd_out = "state.json", bd_digits = "1", bd_preset;
  std::uint64_t bd_stages = 0, bd_max_prime = 1'000'000'000ull, bd_h_max = 16,
                bd_ceiling = 16384, bd_run_length = 4;
  unsigned bd_base = 2, bd_mod_exp = 5;
  bd->add_option("--mode", bd_mode, "faithful | relaxed | generalized")
      ->check(CLI::IsMember({"faithful", "relaxed", "generalized"}));
  bd->add_option("--stages", bd_stages, "truncation depth K (stages 0..K)");
  bd->add_option("--max-prime", bd_max_prime, "search budget");
  bd->add_option("--preset", bd_preset, "named preset (relaxed-default)")
      ->check(CLI::IsMember({"relaxed-default"}));
  bd->add_option("--h-max", bd_h_max, "largest frequency the digit rule absorbs");
  bd->add_option("--ceiling", bd_ceiling, "digit exponent ceiling");
  bd->add_option("--base", bd_base, "radix base (generalized mode)");
  bd->add_option("--run-length", bd_run_length, "stage run length");
  bd->add_option("--modulus-exponent", bd_mod_exp, "stage modulus exponent");
  bd->add_option("--digits", bd_digits, "comma-separated stage digits, cycled");
  bd->add_option("--out", bd_out, "state file to write");

  // weyl
  auto* wy = app.add_subcommand("weyl", "evaluate one normalized exponential sum");
  wy->set_help_flag("--help", "print help");
  std::string wy_state;
  std::uint64_t wy_h = 1, wy_shift = 0, wy_N = 1;
  wy->add_option("--state", wy_state, "state file")->required();
  wy->add_option("--h", wy_h, "frequency");
  wy->add_option("--shift", wy_shift, "index shift m");
  wy->add_option("--N", wy_N, "window length")->required();

  // verify
  auto* vf = app.add_subcommand("verify", "run certified checks against a state");
  vf->set_help_flag("--help", "print help");
  std::string vf_state, vf_lemma = "dist";
  std::uint64_t vf_h = 1;
  std::int64_t vf_k = -1, vf_N = -1;
  vf->add_option("--state", vf_state, "state file")->required();
  vf->add_option("--lemma", vf_lemma, "dist | pointwise | sandwich | liouville");
  vf->add_option("--h", vf_h, "frequency");
  vf->add_option("--k", vf_k, "stage (default: all)");
  vf->add_option("--N", vf_N, "window length for sandwich (default: all N <= r_k)");

  // discrepancy
  auto* dc = app.add_subcommand("discrepancy", "star discrepancy of phase windows");
  dc->set_help_flag("--help", "print help");
  std::string dc_state, dc_windows, dc_out = "report.csv";
  std::uint64_t dc_h = 1;
  dc->add_option("--state", dc_state, "state file")->required();
  dc->add_option("--h", dc_h, "frequency");
  dc->add_option("--windows", dc_windows, "JSON window list [{m,N},...] (default: built-ins)");
  dc->add_option("--out", dc_out, "CSV output path");

  // report
  auto* rp = app.add_subcommand("report", "write the full report bundle");
  std::string rp_state, rp_out = "report";
  std::uint64_t rp_h_max = 16, rp_random = 0;
  rp->add_option("--state", rp_state, "state file")->required();
  rp->add_option("--h-max", rp_h_max, "verify frequencies 1..h_max");
  rp->add_option("--out", rp_out, "output directory");
  rp->add_option("--random-shifts", rp_random, "extra sampled shifts in the profile");

  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
    if (sv->parsed()) return cmd_sieve(sv_limit, sv_out, sv_format);
    if (fr->parsed()) return cmd_find_run(fr_k, fr_q, fr_a, fr_max_prime, fr_all, fr_out, threads);
    if (bd->parsed()) {
      if (bd_preset == "relaxed-default") {
        if (bd->count("--mode") && bd_mode != "relaxed")
          throw contract_violation("--preset relaxed-default requires --mode relaxed");
        bd_mode = "relaxed";
        if (bd_stages == 0) bd_stages = 2;
      }
      return cmd_build(bd_mode, bd_stages, bd_max_prime, bd_h_max, bd_ceiling, bd_base,
                       bd_run_length, bd_mod_exp, bd_digits, bd_out, threads);
    }
    if (wy->parsed()) return cmd_weyl(wy_state, wy_h, wy_shift, wy_N, seed);
    if (vf->parsed()) return cmd_verify(vf_state, vf_lemma, vf_h, vf_k, vf_N, seed);
    if (dc->parsed()) return cmd_discrepancy(dc_state, dc_h, dc_windows, dc_out, threads);
    if (rp->parsed()) return cmd_report(rp_state, rp_h_max, rp_out, rp_random, seed, threads);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << json{{"error", e.what()}}.dump() << "\n";
    return kExitError;
  }
  return kExitError;
}
