#include "silo/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace silo::io {

using nlohmann::json;

const char* format_name(Format f) {
  return f == Format::Csv ? "csv" : "json";
}

mmzd::PinningSpec PinningConfig::to_spec() const {
  mmzd::PinningSpec spec;
  spec.controller = controller - 1;
  spec.phi = phi;
  spec.slice = slice;
  spec.weights = weights;
  spec.completion = completion;
  return spec;
}

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& msg) {
  fail(ErrorKind::Validation, "config " + path + ": " + msg);
}

void require_object(const json& j, const std::string& path,
                    const std::set<std::string>& allowed) {
  if (!j.is_object()) bad(path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key()))
      bad(path + "." + it.key(), "unknown key");
  }
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) bad(path, "expected a number");
  return j.get<double>();
}

int get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) bad(path, "expected an integer");
  return j.get<int>();
}

std::uint64_t get_u64(const json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer()) {
    auto v = j.get<std::int64_t>();
    if (v < 0) bad(path, "expected a nonnegative integer");
    return static_cast<std::uint64_t>(v);
  }
  bad(path, "expected a nonnegative integer");
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) bad(path, "expected a string");
  return j.get<std::string>();
}

GameConfig parse_game(const json& j, const std::string& path) {
  require_object(j, path,
                 {"n_orgs", "local_iters", "max_rounds", "theta0", "theta1",
                  "orgs"});
  GameConfig cfg;
  for (const char* key : {"n_orgs", "local_iters", "max_rounds", "theta0",
                          "theta1", "orgs"}) {
    if (!j.contains(key)) bad(path + "." + key, "missing");
  }
  cfg.n_orgs = get_int(j.at("n_orgs"), path + ".n_orgs");
  cfg.local_iters = get_int(j.at("local_iters"), path + ".local_iters");
  cfg.max_rounds = get_int(j.at("max_rounds"), path + ".max_rounds");
  cfg.theta0 = get_number(j.at("theta0"), path + ".theta0");
  cfg.theta1 = get_number(j.at("theta1"), path + ".theta1");
  const json& orgs = j.at("orgs");
  if (!orgs.is_array()) bad(path + ".orgs", "expected an array");
  for (size_t i = 0; i < orgs.size(); ++i) {
    const std::string opath = path + ".orgs[" + std::to_string(i) + "]";
    require_object(orgs[i], opath, {"unit_revenue", "compute_coeff", "comm_cost"});
    OrgParams p;
    if (!orgs[i].contains("unit_revenue")) bad(opath + ".unit_revenue", "missing");
    if (!orgs[i].contains("compute_coeff")) bad(opath + ".compute_coeff", "missing");
    if (!orgs[i].contains("comm_cost")) bad(opath + ".comm_cost", "missing");
    p.unit_revenue = get_number(orgs[i].at("unit_revenue"), opath + ".unit_revenue");
    p.compute_coeff = get_number(orgs[i].at("compute_coeff"), opath + ".compute_coeff");
    p.comm_cost = get_number(orgs[i].at("comm_cost"), opath + ".comm_cost");
    cfg.orgs.push_back(p);
  }
  cfg.validate();
  return cfg;
}

std::vector<StrategyKind> parse_strategies(const json& j, const std::string& path,
                                           const GameConfig& game) {
  if (!j.is_array()) bad(path, "expected an array");
  if (static_cast<int>(j.size()) != game.n_orgs)
    bad(path, "expected exactly n_orgs entries");
  std::vector<StrategyKind> kinds;
  for (size_t i = 0; i < j.size(); ++i) {
    const std::string spath = path + "[" + std::to_string(i) + "]";
    require_object(j[i], spath, {"kind"});
    if (!j[i].contains("kind")) bad(spath + ".kind", "missing");
    const std::string name = get_string(j[i].at("kind"), spath + ".kind");
    auto kind = parse_kind(name);
    if (!kind) bad(spath + ".kind", "unknown strategy kind '" + name + "'");
    kinds.push_back(*kind);
  }
  return kinds;
}

PinningConfig parse_pinning(const json& j, const std::string& path,
                            const GameConfig& game) {
  require_object(j, path, {"controller", "phi", "slice", "weights", "completion"});
  PinningConfig pin;
  if (j.contains("controller"))
    pin.controller = get_int(j.at("controller"), path + ".controller");
  if (j.contains("phi")) pin.phi = get_number(j.at("phi"), path + ".phi");
  if (j.contains("slice")) pin.slice = get_int(j.at("slice"), path + ".slice");
  if (j.contains("weights")) {
    const json& w = j.at("weights");
    if (!w.is_array()) bad(path + ".weights", "expected an array");
    for (size_t i = 0; i < w.size(); ++i)
      pin.weights.push_back(
          get_number(w[i], path + ".weights[" + std::to_string(i) + "]"));
    if (static_cast<int>(pin.weights.size()) != game.n_orgs)
      bad(path + ".weights", "expected exactly n_orgs entries");
  }
  if (j.contains("completion")) {
    const std::string name = get_string(j.at("completion"), path + ".completion");
    auto c = mmzd::parse_completion(name);
    if (!c) bad(path + ".completion", "unknown completion rule '" + name + "'");
    pin.completion = *c;
  }
  if (pin.controller < 1 || pin.controller > game.n_orgs)
    bad(path + ".controller", "must be in [1, n_orgs]");
  if (pin.phi == 0.0) bad(path + ".phi", "must be nonzero");
  if (pin.slice < 0 || pin.slice > game.max_rounds)
    bad(path + ".slice", "must be in [0, max_rounds]");
  return pin;
}

SimConfig parse_sim(const json& j, const std::string& path,
                    const GameConfig& game) {
  require_object(j, path,
                 {"rounds", "reps", "seed", "initial_state", "initial_profile",
                  "final_window"});
  SimConfig sim;
  if (j.contains("rounds")) sim.rounds = get_int(j.at("rounds"), path + ".rounds");
  if (j.contains("reps")) sim.reps = get_int(j.at("reps"), path + ".reps");
  if (j.contains("seed")) sim.seed = get_u64(j.at("seed"), path + ".seed");
  if (j.contains("initial_state")) {
    const std::string name =
        get_string(j.at("initial_state"), path + ".initial_state");
    auto s = sim::parse_initial_state(name);
    if (!s) bad(path + ".initial_state", "unknown initial state '" + name + "'");
    sim.initial = *s;
  }
  if (j.contains("initial_profile")) {
    const json& p = j.at("initial_profile");
    if (!p.is_array()) bad(path + ".initial_profile", "expected an array");
    for (size_t i = 0; i < p.size(); ++i)
      sim.initial_profile.push_back(
          get_int(p[i], path + ".initial_profile[" + std::to_string(i) + "]"));
  }
  if (j.contains("final_window"))
    sim.final_window = get_int(j.at("final_window"), path + ".final_window");
  if (sim.rounds < 1) bad(path + ".rounds", "must be >= 1");
  if (sim.reps < 1) bad(path + ".reps", "must be >= 1");
  if (sim.final_window < 1 || sim.final_window > sim.rounds)
    bad(path + ".final_window", "must be in [1, rounds]");
  if (sim.initial == sim::InitialState::Custom) {
    if (static_cast<int>(sim.initial_profile.size()) != game.n_orgs)
      bad(path + ".initial_profile", "expected exactly n_orgs entries");
    for (int a : sim.initial_profile)
      if (a < 0 || a > game.max_rounds)
        bad(path + ".initial_profile", "action outside {0..max_rounds}");
  } else if (!sim.initial_profile.empty()) {
    bad(path + ".initial_profile",
        "only allowed with initial_state == \"custom\"");
  }
  return sim;
}

OutputConfig parse_output(const json& j, const std::string& path) {
  require_object(j, path, {"dir", "format"});
  OutputConfig out;
  if (j.contains("dir")) out.dir = get_string(j.at("dir"), path + ".dir");
  if (j.contains("format")) {
    const std::string name = get_string(j.at("format"), path + ".format");
    if (name == "csv")
      out.format = Format::Csv;
    else if (name == "json")
      out.format = Format::Json;
    else
      bad(path + ".format", "expected \"csv\" or \"json\"");
  }
  return out;
}

json game_to_json(const GameConfig& cfg) {
  json orgs = json::array();
  for (const OrgParams& p : cfg.orgs) {
    orgs.push_back({{"unit_revenue", p.unit_revenue},
                    {"compute_coeff", p.compute_coeff},
                    {"comm_cost", p.comm_cost}});
  }
  return json{{"n_orgs", cfg.n_orgs},
              {"local_iters", cfg.local_iters},
              {"max_rounds", cfg.max_rounds},
              {"theta0", cfg.theta0},
              {"theta1", cfg.theta1},
              {"orgs", orgs}};
}

}  // namespace

RunConfig load_config_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Parse, std::string("config is not valid JSON: ") + e.what());
  }
  require_object(j, "$",
                 {"description", "game", "strategies", "pinning", "sim",
                  "output"});
  if (!j.contains("game")) bad("$.game", "missing");
  RunConfig cfg;
  if (j.contains("description"))
    cfg.description = get_string(j.at("description"), "$.description");
  cfg.game = parse_game(j.at("game"), "$.game");
  if (j.contains("strategies")) {
    cfg.strategies = parse_strategies(j.at("strategies"), "$.strategies", cfg.game);
    cfg.has_strategies = true;
  }
  if (j.contains("pinning"))
    cfg.pinning = parse_pinning(j.at("pinning"), "$.pinning", cfg.game);
  if (cfg.pinning.slice > cfg.game.max_rounds)
    bad("$.pinning.slice", "must be in [0, max_rounds]");
  if (j.contains("sim")) cfg.sim = parse_sim(j.at("sim"), "$.sim", cfg.game);
  if (j.contains("output")) cfg.output = parse_output(j.at("output"), "$.output");
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_config_json(buf.str());
}

std::string serialize_config(const RunConfig& cfg) {
  json j;
  if (!cfg.description.empty()) j["description"] = cfg.description;
  j["game"] = game_to_json(cfg.game);
  if (cfg.has_strategies) {
    json arr = json::array();
    for (StrategyKind k : cfg.strategies) arr.push_back({{"kind", kind_name(k)}});
    j["strategies"] = arr;
  }
  json pin{{"controller", cfg.pinning.controller},
           {"phi", cfg.pinning.phi},
           {"slice", cfg.pinning.slice},
           {"completion", mmzd::completion_name(cfg.pinning.completion)}};
  if (!cfg.pinning.weights.empty()) pin["weights"] = cfg.pinning.weights;
  j["pinning"] = pin;
  json sim{{"rounds", cfg.sim.rounds},
           {"reps", cfg.sim.reps},
           {"seed", cfg.sim.seed},
           {"initial_state", sim::initial_state_name(cfg.sim.initial)},
           {"final_window", cfg.sim.final_window}};
  if (cfg.sim.initial == sim::InitialState::Custom)
    sim["initial_profile"] = cfg.sim.initial_profile;
  j["sim"] = sim;
  j["output"] = json{{"dir", cfg.output.dir},
                     {"format", format_name(cfg.output.format)}};
  return j.dump(2) + "\n";
}

std::uint64_t game_hash(const GameConfig& cfg) {
  const std::string canonical = game_to_json(cfg).dump();
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a 64
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string game_hash_hex(const GameConfig& cfg) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                static_cast<unsigned long long>(game_hash(cfg)));
  return buf;
}

}  // namespace silo::io
