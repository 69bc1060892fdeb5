#include "silo/sim.hpp"

#include <cmath>
#include <string>
#include <thread>

namespace silo::sim {

const char* initial_state_name(InitialState s) {
  switch (s) {
    case InitialState::AllR: return "all-r";
    case InitialState::AllZero: return "all-zero";
    case InitialState::UniformRandom: return "uniform-random";
    case InitialState::Custom: return "custom";
  }
  return "?";
}

std::optional<InitialState> parse_initial_state(const std::string& name) {
  if (name == "all-r") return InitialState::AllR;
  if (name == "all-zero") return InitialState::AllZero;
  if (name == "uniform-random") return InitialState::UniformRandom;
  if (name == "custom") return InitialState::Custom;
  return std::nullopt;
}

StrategyAssignment materialize_strategies(
    const GameConfig& cfg, const std::vector<StrategyKind>& kinds,
    const std::optional<mmzd::PinningResult>& pinning, std::uint64_t seed) {
  cfg.validate();
  if (static_cast<int>(kinds.size()) != cfg.n_orgs)
    fail(ErrorKind::Validation, "need one strategy kind per organization");
  // Mixed orgs draw once per run from the setup stream, in org order.
  Pcg32 setup(seed, 0);
  StrategyAssignment out;
  out.strategies.reserve(kinds.size());
  out.labels.reserve(kinds.size());
  static constexpr StrategyKind pool[4] = {StrategyKind::AllC, StrategyKind::AllD,
                                           StrategyKind::Rand, StrategyKind::Tft};
  for (int i = 0; i < cfg.n_orgs; ++i) {
    StrategyKind kind = kinds[static_cast<size_t>(i)];
    if (kind == StrategyKind::Mixed) {
      kind = pool[setup.next_below(4)];
    }
    if (kind == StrategyKind::Mmzd) {
      if (!pinning)
        fail(ErrorKind::Validation,
             "org " + std::to_string(i + 1) +
                 " uses mmzd but no pinning strategy was synthesized");
      if (pinning->spec.controller != i)
        fail(ErrorKind::Validation,
             "mmzd strategy was synthesized for org " +
                 std::to_string(pinning->spec.controller + 1) + ", not org " +
                 std::to_string(i + 1));
      out.strategies.push_back(pinning->strategy);
      out.labels.emplace_back("mmzd");
    } else {
      out.strategies.push_back(make_baseline(BaselineKind{kind, {}}, cfg, i));
      out.labels.emplace_back(kind_name(kind));
    }
  }
  return out;
}

namespace {

JointProfile initial_profile_for(const SimPlan& plan, Pcg32& rng) {
  const int n = plan.cfg.n_orgs;
  const int r = plan.cfg.max_rounds;
  switch (plan.initial) {
    case InitialState::AllR:
      return JointProfile::constant(n, r);
    case InitialState::AllZero:
      return JointProfile::constant(n, 0);
    case InitialState::UniformRandom: {
      JointProfile p = JointProfile::constant(n, 0);
      for (int i = 0; i < n; ++i)
        p[i] = static_cast<int>(rng.next_below(static_cast<std::uint32_t>(r + 1)));
      return p;
    }
    case InitialState::Custom:
      return plan.initial_profile;
  }
  fail(ErrorKind::Internal, "unreachable initial state");
}

void validate_plan(const SimPlan& plan, const StrategyAssignment& assignment) {
  plan.cfg.validate();
  if (plan.rounds < 1) fail(ErrorKind::Validation, "sim.rounds must be >= 1");
  if (plan.reps < 1) fail(ErrorKind::Validation, "sim.reps must be >= 1");
  if (plan.final_window < 1 || plan.final_window > plan.rounds)
    fail(ErrorKind::Validation, "final window must be in [1, rounds]");
  if (static_cast<int>(assignment.strategies.size()) != plan.cfg.n_orgs)
    fail(ErrorKind::Validation, "need one strategy per organization");
  if (plan.initial == InitialState::Custom)
    plan.initial_profile.validate(plan.cfg);
}

}  // namespace

Trajectory run(const SimPlan& plan, const StrategyAssignment& assignment) {
  validate_plan(plan, assignment);
  const int n_orgs = plan.cfg.n_orgs;
  const int rounds = plan.rounds;
  const int reps = plan.reps;

  Trajectory traj;
  traj.labels = assignment.labels;
  traj.reps = reps;
  traj.rounds = rounds;
  traj.rows.resize(static_cast<size_t>(reps) * static_cast<size_t>(rounds));

  auto worker = [&](int rep_begin, int rep_end) {
    std::vector<double> scratch;
    std::vector<double> utilities(static_cast<size_t>(n_orgs));
    JointProfile state, next;
    next.actions.resize(static_cast<size_t>(n_orgs));
    for (int rep = rep_begin; rep < rep_end; ++rep) {
      Pcg32 rng(plan.seed, static_cast<std::uint64_t>(rep) + 1);
      state = initial_profile_for(plan, rng);
      for (int round = 1; round <= rounds; ++round) {
        for (int i = 0; i < n_orgs; ++i)
          next[i] = act(assignment.strategies[static_cast<size_t>(i)], state,
                        rng, scratch);
        state = next;
        const double welfare =
            utilities_into(plan.cfg, state, std::span<double>(utilities));
        TrajectoryRow& row =
            traj.rows[static_cast<size_t>(rep) * static_cast<size_t>(rounds) +
                      static_cast<size_t>(round - 1)];
        row.rep = rep;
        row.round = round;
        row.actions = state.actions;
        row.utilities = utilities;
        row.welfare = welfare;
      }
    }
  };

  int threads = plan.threads;
  if (threads <= 0)
    threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, reps));
  if (threads == 1) {
    worker(0, reps);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    const int chunk = (reps + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const int begin = t * chunk;
      const int end = std::min(reps, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(worker, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  traj.round_mean.resize(static_cast<size_t>(rounds));
  traj.round_std.resize(static_cast<size_t>(rounds));
  traj.running_mean.resize(static_cast<size_t>(rounds));
  double running = 0.0;
  for (int round = 1; round <= rounds; ++round) {
    double mean = 0.0;
    for (int rep = 0; rep < reps; ++rep) mean += traj.at(rep, round).welfare;
    mean /= static_cast<double>(reps);
    double var = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
      const double d = traj.at(rep, round).welfare - mean;
      var += d * d;
    }
    var = reps > 1 ? var / static_cast<double>(reps - 1) : 0.0;
    traj.round_mean[static_cast<size_t>(round - 1)] = mean;
    traj.round_std[static_cast<size_t>(round - 1)] = std::sqrt(var);
    running += mean;
    traj.running_mean[static_cast<size_t>(round - 1)] =
        running / static_cast<double>(round);
  }
  return traj;
}

ConvergenceReport convergence_report(const Trajectory& traj, double target,
                                     int window, double tolerance) {
  if (window < 1 || window > traj.rounds)
    fail(ErrorKind::InvalidArgument, "window must be in [1, rounds]");
  ConvergenceReport report;
  report.window = window;
  report.target = target;
  report.tolerance = tolerance;
  double mean = 0.0;
  for (int round = traj.rounds - window + 1; round <= traj.rounds; ++round)
    mean += traj.round_mean[static_cast<size_t>(round - 1)];
  mean /= static_cast<double>(window);
  double var = 0.0;
  for (int round = traj.rounds - window + 1; round <= traj.rounds; ++round) {
    const double d = traj.round_mean[static_cast<size_t>(round - 1)] - mean;
    var += d * d;
  }
  report.window_mean = mean;
  report.window_std = window > 1 ? std::sqrt(var / static_cast<double>(window - 1)) : 0.0;
  report.deviation = std::fabs(mean - target);
  report.within_tolerance = report.deviation <= tolerance;
  return report;
}

std::pair<double, double> final_window_stats(const Trajectory& traj, int window) {
  if (window < 1 || window > traj.rounds)
    fail(ErrorKind::InvalidArgument, "window must be in [1, rounds]");
  std::vector<double> rep_means(static_cast<size_t>(traj.reps));
  for (int rep = 0; rep < traj.reps; ++rep) {
    double acc = 0.0;
    for (int round = traj.rounds - window + 1; round <= traj.rounds; ++round)
      acc += traj.at(rep, round).welfare;
    rep_means[static_cast<size_t>(rep)] = acc / static_cast<double>(window);
  }
  double mean = 0.0;
  for (double m : rep_means) mean += m;
  mean /= static_cast<double>(traj.reps);
  double var = 0.0;
  for (double m : rep_means) var += (m - mean) * (m - mean);
  var = traj.reps > 1 ? var / static_cast<double>(traj.reps - 1) : 0.0;
  return {mean, std::sqrt(var)};
}

std::vector<GridCell> strategy_grid(const SimPlan& plan,
                                    const std::vector<NamedController>& controllers,
                                    const std::vector<StrategyKind>& opponents,
                                    int controller_org, double pinned_target) {
  plan.cfg.validate();
  if (controller_org < 0 || controller_org >= plan.cfg.n_orgs)
    fail(ErrorKind::InvalidArgument, "controller org out of range");
  std::vector<GridCell> cells;
  cells.reserve(controllers.size() * opponents.size());
  for (const NamedController& controller : controllers) {
    for (StrategyKind opp : opponents) {
      // Mixed opponents draw per cell from the setup stream, in org order.
      Pcg32 setup(plan.seed, 0);
      static constexpr StrategyKind pool[4] = {
          StrategyKind::AllC, StrategyKind::AllD, StrategyKind::Rand,
          StrategyKind::Tft};
      StrategyAssignment assignment;
      assignment.strategies.reserve(static_cast<size_t>(plan.cfg.n_orgs));
      assignment.labels.reserve(static_cast<size_t>(plan.cfg.n_orgs));
      for (int i = 0; i < plan.cfg.n_orgs; ++i) {
        if (i == controller_org) {
          assignment.strategies.push_back(controller.strategy);
          assignment.labels.push_back(controller.label);
          continue;
        }
        StrategyKind kind = opp;
        if (kind == StrategyKind::Mixed) kind = pool[setup.next_below(4)];
        assignment.strategies.push_back(
            make_baseline(BaselineKind{kind, {}}, plan.cfg, i));
        assignment.labels.emplace_back(kind_name(kind));
      }
      Trajectory traj = run(plan, assignment);
      auto [mean, sd] = final_window_stats(traj, plan.final_window);
      cells.push_back(GridCell{controller.label, kind_name(opp), mean, sd,
                               pinned_target});
    }
  }
  return cells;
}

}  // namespace silo::sim
