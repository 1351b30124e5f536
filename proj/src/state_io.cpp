#include <welldist/state_io.hpp>

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace welldist {

namespace {

using nlohmann::json;

json run_to_json(const CongruentRun& r) {
  json j;
  j["m"] = r.m;
  j["k"] = r.k;
  j["q"] = r.q;
  j["a"] = r.a;
  j["first_prime"] = r.first_prime;
  j["last_prime"] = r.last_prime;
  j["primes"] = r.primes;
  return j;
}

CongruentRun run_from_json(const json& j) {
  CongruentRun r;
  r.m = j.at("m").get<std::uint64_t>();
  r.k = j.at("k").get<std::uint64_t>();
  r.q = j.at("q").get<std::uint64_t>();
  r.a = j.at("a").get<std::uint64_t>();
  r.first_prime = j.at("first_prime").get<std::uint64_t>();
  r.last_prime = j.at("last_prime").get<std::uint64_t>();
  if (j.contains("primes")) r.primes = j.at("primes").get<std::vector<std::uint64_t>>();
  return r;
}

} // namespace

std::string state_to_json(const ConstructionState& state) {
  json j;
  j["format"] = "welldist-state";
  j["version"] = 1;
  j["mode"] = to_string(state.mode);
  j["base"] = state.base;
  j["h_max"] = state.h_max;
  j["exponent_ceiling"] = state.exponent_ceiling;
  j["complete"] = state.complete;
  j["synthetic"] = state.synthetic;
  j["alpha"] = state.alpha.to_triple();
  j["b_max"] = state.b_max.str();
  if (state.have_next_exponent) j["next_exponent"] = state.next_exponent.str();
  if (state.frontier) {
    j["frontier"] = {{"scanned_prime", state.frontier->scanned_prime},
                     {"scanned_index", state.frontier->scanned_index},
                     {"reason", state.frontier->reason}};
  }
  json stages = json::array();
  for (const StageRecord& s : state.stages) {
    json sj;
    sj["k"] = s.k;
    sj["n"] = s.n;
    sj["j"] = s.j;
    sj["r"] = s.r;
    sj["m"] = s.m;
    sj["modulus"] = s.modulus.str();
    sj["pi"] = s.pi.str();
    sj["digit"] = s.digit.str();
    sj["synthetic"] = s.synthetic;
    if (s.run) sj["run"] = run_to_json(*s.run);
    stages.push_back(std::move(sj));
  }
  j["stages"] = std::move(stages);
  return j.dump(2);
}

ConstructionState state_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw io_error(std::string("state file is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != "welldist-state")
      throw io_error("not a welldist state file");
    if (j.at("version").get<int>() != 1) throw io_error("unsupported state version");
    ConstructionState st;
    st.mode = build_mode_from_string(j.at("mode").get<std::string>());
    st.base = j.at("base").get<unsigned>();
    st.h_max = j.at("h_max").get<std::uint64_t>();
    st.exponent_ceiling = j.at("exponent_ceiling").get<std::uint64_t>();
    st.complete = j.at("complete").get<bool>();
    st.synthetic = j.at("synthetic").get<bool>();
    st.alpha = RadixRational::parse_triple(j.at("alpha").get<std::string>());
    st.b_max = BigInt(j.at("b_max").get<std::string>());
    if (j.contains("next_exponent")) {
      st.next_exponent = BigInt(j.at("next_exponent").get<std::string>());
      st.have_next_exponent = true;
    }
    if (j.contains("frontier")) {
      Frontier f;
      f.scanned_prime = j["frontier"].at("scanned_prime").get<std::uint64_t>();
      f.scanned_index = j["frontier"].at("scanned_index").get<std::uint64_t>();
      f.reason = j["frontier"].value("reason", "");
      st.frontier = std::move(f);
    }
    for (const json& sj : j.at("stages")) {
      StageRecord s;
      s.k = sj.at("k").get<std::uint64_t>();
      s.n = sj.at("n").get<std::uint64_t>();
      s.j = sj.at("j").get<unsigned>();
      s.r = sj.at("r").get<std::uint64_t>();
      s.m = sj.at("m").get<std::uint64_t>();
      s.modulus = BigInt(sj.at("modulus").get<std::string>());
      s.pi = BigInt(sj.at("pi").get<std::string>());
      s.digit = BigInt(sj.at("digit").get<std::string>());
      s.synthetic = sj.value("synthetic", false);
      if (sj.contains("run")) s.run = run_from_json(sj.at("run"));
      st.stages.push_back(std::move(s));
    }
    // integrity: the stored truncation must equal the sum of its stage terms
    RadixRational resum(st.base, 0, 0);
    for (const StageRecord& s : st.stages)
      resum = resum + RadixRational::power_term(st.base, s.n, s.digit);
    if (!(resum == st.alpha))
      throw io_error("state file is inconsistent: alpha does not equal its stage digits");
    return st;
  } catch (const json::exception& e) {
    throw io_error(std::string("state file is missing required fields: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw io_error(std::string("state file holds malformed values: ") + e.what());
  }
}

void save_state(const ConstructionState& state, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open " + path + " for writing");
  out << state_to_json(state) << "\n";
  if (!out) throw io_error("failed writing " + path);
}

ConstructionState load_state(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return state_from_json(buf.str());
}

} // namespace welldist
