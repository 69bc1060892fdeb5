#include "silo/ops.hpp"

#include <cstdlib>
#include <limits>
#include <optional>
#include <thread>

#include "silo/markov.hpp"
#include "silo/render.hpp"

namespace silo::ops {

namespace {

sim::SimPlan plan_from(const io::RunConfig& cfg) {
  sim::SimPlan plan;
  plan.cfg = cfg.game;
  plan.rounds = cfg.sim.rounds;
  plan.reps = cfg.sim.reps;
  plan.seed = cfg.sim.seed;
  plan.initial = cfg.sim.initial;
  if (cfg.sim.initial == sim::InitialState::Custom)
    plan.initial_profile = JointProfile(cfg.sim.initial_profile);
  plan.final_window = cfg.sim.final_window;
  plan.threads = resolve_threads(cfg.sim.threads);
  return plan;
}

bool needs_mmzd(const io::RunConfig& cfg) {
  if (!cfg.has_strategies) return false;
  for (StrategyKind k : cfg.strategies)
    if (k == StrategyKind::Mmzd) return true;
  return false;
}

// Synthesizes at alpha0_min of the configured slice/phi.
mmzd::PinningResult synthesize_configured(const io::RunConfig& cfg) {
  return mmzd::max_pinned_welfare(cfg.game, cfg.pinning.to_spec());
}

OpResult infeasible_result(const mmzd::InfeasibleError& e, io::Format format) {
  OpResult res;
  res.infeasible = true;
  res.message = e.what();
  res.text = render::render_bounds(e.per_slice(), format);
  return res;
}

}  // namespace

int resolve_threads(int explicit_threads) {
  if (explicit_threads > 0) return explicit_threads;
  if (const char* env = std::getenv("SILO_GAMES_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

OpResult run_analyze(const io::RunConfig& cfg, io::Format format) {
  DilemmaReport report = analyze_dilemma(cfg.game);
  return {render::render_dilemma(cfg.game, report, format), false, {}};
}

OpResult run_bounds(const io::RunConfig& cfg, BoundsMode mode, bool all_slices,
                    io::Format format) {
  const mmzd::PinningSpec base = cfg.pinning.to_spec();
  StateSpace space(cfg.game);
  std::vector<int> slices;
  if (all_slices) {
    for (int g = 0; g <= cfg.game.max_rounds; ++g) slices.push_back(g);
  } else {
    slices.push_back(base.slice);
  }
  std::vector<mmzd::AlphaBounds> rows;
  bool any_feasible = false;
  for (int g : slices) {
    mmzd::PinningSpec spec = base;
    spec.slice = g;
    mmzd::AlphaBounds b;
    switch (mode) {
      case BoundsMode::Enumerate: {
        std::vector<double> S = mmzd::state_welfare_vector(
            cfg.game, spec.weights, kDefaultEnumerationCap);
        b = mmzd::alpha0_bounds(cfg.game, S, spec.phi, spec.slice,
                                spec.controller);
        break;
      }
      case BoundsMode::Aggregate:
        b = mmzd::aggregate_alpha0_bounds(cfg.game, spec.phi, spec.slice,
                                          spec.controller);
        break;
      case BoundsMode::Auto:
        b = mmzd::compute_bounds(cfg.game, spec);
        break;
    }
    any_feasible = any_feasible || b.feasible;
    rows.push_back(b);
  }
  OpResult res;
  res.text = render::render_bounds(rows, format);
  res.infeasible = !any_feasible;
  if (res.infeasible)
    res.message = "no feasible alpha0 for the reported slice(s)";
  return res;
}

OpResult run_synthesize(const io::RunConfig& cfg,
                        std::optional<double> alpha0_override) {
  try {
    mmzd::PinningResult result =
        alpha0_override
            ? mmzd::synthesize(cfg.game, cfg.pinning.to_spec(), *alpha0_override)
            : synthesize_configured(cfg);
    return {render::render_pinning(cfg.game, result,
                                   io::game_hash_hex(cfg.game)),
            false, {}};
  } catch (const mmzd::InfeasibleError& e) {
    return infeasible_result(e, io::Format::Json);
  } catch (const mmzd::SynthesisError& e) {
    OpResult res;
    res.infeasible = true;
    res.message = e.what();
    res.text = render::render_bounds({e.bounds()}, io::Format::Json);
    return res;
  }
}

namespace {

// Builds the configured strategy profile, synthesizing the pinning strategy
// if any org plays mmzd. Infeasibility propagates as InfeasibleError.
sim::StrategyAssignment assignment_from(const io::RunConfig& cfg) {
  if (!cfg.has_strategies)
    fail(ErrorKind::Validation,
         "config has no strategies section; one kind per org is required");
  std::optional<mmzd::PinningResult> pinning;
  if (needs_mmzd(cfg)) pinning = synthesize_configured(cfg);
  return sim::materialize_strategies(cfg.game, cfg.strategies, pinning,
                                     cfg.sim.seed);
}

}  // namespace

OpResult run_stationary(const io::RunConfig& cfg, io::Format format) {
  try {
    sim::StrategyAssignment assignment = assignment_from(cfg);
    markov::TransitionMatrix M =
        markov::build_transition_matrix(cfg.game, assignment.strategies);
    markov::StationaryResult result = markov::stationary_distribution(M);
    return {render::render_stationary(M.space, result, format), false, {}};
  } catch (const mmzd::InfeasibleError& e) {
    return infeasible_result(e, format);
  }
}

OpResult run_simulate(const io::RunConfig& cfg, io::Format format) {
  try {
    sim::StrategyAssignment assignment = assignment_from(cfg);
    sim::Trajectory traj = sim::run(plan_from(cfg), assignment);
    return {render::render_trajectory(traj, format), false, {}};
  } catch (const mmzd::InfeasibleError& e) {
    return infeasible_result(e, format);
  }
}

OpResult run_grid_row(const io::RunConfig& cfg, const std::string& controller,
                      io::Format format) {
  const sim::SimPlan plan = plan_from(cfg);
  const int controller_org = cfg.pinning.controller - 1;
  const std::vector<StrategyKind> opponents = {
      StrategyKind::AllD, StrategyKind::AllC, StrategyKind::Rand,
      StrategyKind::Tft, StrategyKind::Mixed};

  std::vector<sim::NamedController> controllers;
  double pinned_target = std::numeric_limits<double>::quiet_NaN();
  if (controller == "mmzd") {
    try {
      mmzd::PinningResult pin = synthesize_configured(cfg);
      pinned_target = pin.pinned_welfare;
      controllers.push_back(sim::NamedController{"mmzd", pin.strategy});
    } catch (const mmzd::InfeasibleError& e) {
      return infeasible_result(e, format);
    }
  } else {
    auto kind = parse_kind(controller);
    if (!kind || *kind == StrategyKind::Mixed || *kind == StrategyKind::Mmzd)
      fail(ErrorKind::InvalidArgument,
           "grid controller must be one of mmzd/alld/allc/rand/tft");
    controllers.push_back(sim::NamedController{
        controller,
        make_baseline(BaselineKind{*kind, {}}, cfg.game, controller_org)});
    // Report the pinning target alongside baselines when it exists.
    try {
      mmzd::AlphaBounds b = mmzd::compute_bounds(cfg.game, cfg.pinning.to_spec());
      if (b.feasible) pinned_target = -b.alpha0_min;
    } catch (const Error&) {
    }
  }
  std::vector<sim::GridCell> cells =
      sim::strategy_grid(plan, controllers, opponents, controller_org,
                         pinned_target);
  return {render::render_grid(cells, format), false, {}};
}

}  // namespace silo::ops
