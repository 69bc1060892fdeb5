#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "silo/game.hpp"
#include "silo/mmzd.hpp"
#include "silo/strategy.hpp"

namespace silo::sim {

enum class InitialState { AllR, AllZero, UniformRandom, Custom };

const char* initial_state_name(InitialState s);
std::optional<InitialState> parse_initial_state(const std::string& name);

struct SimPlan {
  GameConfig cfg;
  int rounds = 20;
  int reps = 100;
  std::uint64_t seed = 42;
  InitialState initial = InitialState::AllR;
  JointProfile initial_profile;  // used when initial == Custom
  int final_window = 5;
  int threads = 0;  // 0: one worker per hardware thread (capped by reps)
};

struct StrategyAssignment {
  std::vector<Strategy> strategies;  // one per organization
  std::vector<std::string> labels;   // kind names, used in output columns
};

// Builds concrete strategies from per-org kinds. Mixed orgs draw their
// baseline from setup stream 0 of the plan seed, in org order, fixed for the
// whole run. Mmzd requires the synthesized pinning result.
StrategyAssignment materialize_strategies(
    const GameConfig& cfg, const std::vector<StrategyKind>& kinds,
    const std::optional<mmzd::PinningResult>& pinning, std::uint64_t seed);

struct TrajectoryRow {
  int rep = 0;
  int round = 0;
  std::vector<int> actions;
  std::vector<double> utilities;
  double welfare = 0.0;  // exact row-wise sum of utilities
};

struct Trajectory {
  std::vector<std::string> labels;
  int reps = 0;
  int rounds = 0;
  std::vector<TrajectoryRow> rows;  // ordered by (rep, round)
  // Cross-replication aggregates per round.
  std::vector<double> round_mean;
  std::vector<double> round_std;  // sample std (n-1)
  std::vector<double> running_mean;

  const TrajectoryRow& at(int rep, int round) const {  // round is 1-based
    return rows[static_cast<size_t>(rep) * static_cast<size_t>(rounds) +
                static_cast<size_t>(round - 1)];
  }
};

// Iterated game: every organization samples its action from its strategy
// conditioned on the previous round's joint outcome. Replication p draws from
// stream p+1 of the plan seed, so runs are bit-identical for a given plan and
// independent of how replications are scheduled across threads.
Trajectory run(const SimPlan& plan, const StrategyAssignment& assignment);

struct ConvergenceReport {
  double window_mean = 0.0;
  double deviation = 0.0;
  bool within_tolerance = false;
  double window_std = 0.0;  // sample std of the per-round means in the window
  int window = 0;
  double target = 0.0;
  double tolerance = 0.0;
};

ConvergenceReport convergence_report(const Trajectory& traj, double target,
                                     int window, double tolerance);

struct GridCell {
  std::string controller;
  std::string opponent;
  double mean_welfare = 0.0;  // mean over reps of the final-window mean
  double std_welfare = 0.0;   // sample std over reps of the same
  double pinned_target = 0.0;
};

struct NamedController {
  std::string label;
  Strategy strategy;
};

// One row per (controller, opponent family): the controller occupies
// `controller_org` and every other organization plays the opponent kind.
std::vector<GridCell> strategy_grid(const SimPlan& plan,
                                    const std::vector<NamedController>& controllers,
                                    const std::vector<StrategyKind>& opponents,
                                    int controller_org, double pinned_target);

// Per-rep mean welfare over the last `window` rounds, then (mean, sample std)
// across reps. Shared by strategy_grid and the acceptance checks.
std::pair<double, double> final_window_stats(const Trajectory& traj, int window);

}  // namespace silo::sim
