#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "silo/game.hpp"
#include "silo/mmzd.hpp"
#include "silo/sim.hpp"
#include "silo/strategy.hpp"

namespace silo::io {

enum class Format { Csv, Json };

const char* format_name(Format f);

struct PinningConfig {
  int controller = 1;  // 1-based in config files
  double phi = 0.01;
  int slice = 0;
  std::vector<double> weights;  // empty: unit weights
  mmzd::Completion completion = mmzd::Completion::Uniform;

  mmzd::PinningSpec to_spec() const;  // converts controller to 0-based
};

struct SimConfig {
  int rounds = 20;
  int reps = 100;
  std::uint64_t seed = 42;
  sim::InitialState initial = sim::InitialState::AllR;
  std::vector<int> initial_profile;  // used when initial == Custom
  int final_window = 5;
  int threads = 0;  // not part of the file schema; set via API/env
};

struct OutputConfig {
  std::string dir = ".";
  Format format = Format::Csv;
};

struct RunConfig {
  std::string description;
  GameConfig game;
  bool has_strategies = false;
  std::vector<StrategyKind> strategies;  // one kind per organization
  PinningConfig pinning;
  SimConfig sim;
  OutputConfig output;
};

// Strict JSON loader: unknown keys anywhere are rejected with their path, and
// every cross-field invariant of the housed types is re-checked.
RunConfig load_config_json(const std::string& json_text);
RunConfig load_config_file(const std::string& path);

// Canonical serialization; load(serialize(c)) == c field-for-field.
std::string serialize_config(const RunConfig& cfg);

// FNV-1a 64 over the canonical serialization of the game section; stamped
// into synthesized strategy files so they can be matched to their config.
std::uint64_t game_hash(const GameConfig& cfg);
std::string game_hash_hex(const GameConfig& cfg);

}  // namespace silo::io
