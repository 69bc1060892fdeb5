#include "silo/mmzd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace silo::mmzd {

namespace {

constexpr double kProbTol = 1e-12;
constexpr double kBoundsTol = 1e-12;

std::vector<double> unit_weights(int n) {
  return std::vector<double>(static_cast<size_t>(n), 1.0);
}

std::vector<double> effective_weights(const GameConfig& cfg,
                                      std::span<const double> weights) {
  if (weights.empty()) return unit_weights(cfg.n_orgs);
  if (static_cast<int>(weights.size()) != cfg.n_orgs)
    fail(ErrorKind::InvalidArgument, "weights must have one entry per org");
  for (double w : weights)
    if (!std::isfinite(w))
      fail(ErrorKind::InvalidArgument, "weights must be finite");
  return std::vector<double>(weights.begin(), weights.end());
}

bool is_unit(std::span<const double> weights) {
  for (double w : weights)
    if (w != 1.0) return false;
  return true;
}

void validate_spec(const GameConfig& cfg, const PinningSpec& spec) {
  cfg.validate();
  if (spec.controller < 0 || spec.controller >= cfg.n_orgs)
    fail(ErrorKind::InvalidArgument, "pinning controller out of range");
  if (spec.slice < 0 || spec.slice > cfg.max_rounds)
    fail(ErrorKind::InvalidArgument, "pinning slice outside {0..max_rounds}");
  if (!(std::isfinite(spec.phi)) || spec.phi == 0.0)
    fail(ErrorKind::InvalidArgument, "phi must be finite and nonzero");
}

// Extremes of S over one block of states, with the states attaining them.
struct BlockExtremes {
  double min_s = std::numeric_limits<double>::infinity();
  double max_s = -std::numeric_limits<double>::infinity();
  std::uint64_t argmin = 0;
  std::uint64_t argmax = 0;
  JointProfile argmin_profile;
  JointProfile argmax_profile;
  bool seen = false;

  void update(double s, std::uint64_t state, const JointProfile& profile) {
    if (!seen || s < min_s) {
      min_s = s;
      argmin = state;
      argmin_profile = profile;
    }
    if (!seen || s > max_s) {
      max_s = s;
      argmax = state;
      argmax_profile = profile;
    }
    seen = true;
  }
};

AlphaBounds combine_bounds(const BlockExtremes& in, const BlockExtremes& out,
                           double phi, int slice, bool has_indices) {
  if (!in.seen || !out.seen)
    fail(ErrorKind::Internal, "both constraint blocks must be nonempty");
  AlphaBounds b;
  b.slice = slice;
  b.phi = phi;
  b.has_state_indices = has_indices;
  const double inv = 1.0 / phi;
  double lo, hi;
  if (phi > 0.0) {
    // p = 1 + phi(S+a0) on the indicator block, phi(S+a0) elsewhere.
    const double lo_in = -in.min_s - inv;   // p >= 0 on the indicator block
    const double lo_out = -out.min_s;       // p >= 0 off the block
    const double hi_in = -in.max_s;         // p <= 1 on the indicator block
    const double hi_out = -out.max_s + inv; // p <= 1 off the block
    if (lo_in >= lo_out) {
      lo = lo_in;
      b.binding_min_state = in.argmin;
      b.binding_min_profile = in.argmin_profile;
    } else {
      lo = lo_out;
      b.binding_min_state = out.argmin;
      b.binding_min_profile = out.argmin_profile;
    }
    if (hi_in <= hi_out) {
      hi = hi_in;
      b.binding_max_state = in.argmax;
      b.binding_max_profile = in.argmax_profile;
    } else {
      hi = hi_out;
      b.binding_max_state = out.argmax;
      b.binding_max_profile = out.argmax_profile;
    }
  } else {
    const double lo_in = -in.min_s;
    const double lo_out = -out.min_s + inv;
    const double hi_in = -in.max_s - inv;
    const double hi_out = -out.max_s;
    if (lo_in >= lo_out) {
      lo = lo_in;
      b.binding_min_state = in.argmin;
      b.binding_min_profile = in.argmin_profile;
    } else {
      lo = lo_out;
      b.binding_min_state = out.argmin;
      b.binding_min_profile = out.argmin_profile;
    }
    if (hi_in <= hi_out) {
      hi = hi_in;
      b.binding_max_state = in.argmax;
      b.binding_max_profile = in.argmax_profile;
    } else {
      hi = hi_out;
      b.binding_max_state = out.argmax;
      b.binding_max_profile = out.argmax_profile;
    }
  }
  b.alpha0_min = lo;
  b.alpha0_max = hi;
  b.feasible = lo <= hi + kBoundsTol;
  return b;
}

}  // namespace

const char* completion_name(Completion c) {
  switch (c) {
    case Completion::Uniform: return "uniform";
    case Completion::TopAction: return "top-action";
    case Completion::RepeatPrior: return "repeat-prior";
  }
  return "?";
}

std::optional<Completion> parse_completion(const std::string& name) {
  if (name == "uniform") return Completion::Uniform;
  if (name == "top-action") return Completion::TopAction;
  if (name == "repeat-prior") return Completion::RepeatPrior;
  return std::nullopt;
}

double weighted_welfare(const GameConfig& cfg, std::span<const double> weights,
                        const JointProfile& profile) {
  profile.validate(cfg);
  const double chi0 = precision_baseline(cfg);
  const double chi = model_precision(cfg, profile.total());
  const double k = static_cast<double>(cfg.local_iters);
  double acc = 0.0;
  if (weights.empty()) {
    for (int i = 0; i < cfg.n_orgs; ++i) {
      const OrgParams& p = cfg.orgs[static_cast<size_t>(i)];
      acc += p.unit_revenue * (chi0 - chi) -
             p.compute_coeff * k * static_cast<double>(profile[i]) - p.comm_cost;
    }
    return acc;
  }
  if (static_cast<int>(weights.size()) != cfg.n_orgs)
    fail(ErrorKind::InvalidArgument, "weights must have one entry per org");
  for (int i = 0; i < cfg.n_orgs; ++i) {
    const OrgParams& p = cfg.orgs[static_cast<size_t>(i)];
    acc += weights[static_cast<size_t>(i)] *
           (p.unit_revenue * (chi0 - chi) -
            p.compute_coeff * k * static_cast<double>(profile[i]) - p.comm_cost);
  }
  return acc;
}

std::vector<double> state_welfare_vector(const GameConfig& cfg,
                                         std::span<const double> weights,
                                         std::uint64_t cap) {
  cfg.validate();
  StateSpace space(cfg);
  if (!space.enumerable(cap))
    fail(ErrorKind::TooLarge,
         "state space exceeds the enumeration cap; use the aggregate bounds");
  const std::uint64_t n = space.num_states();
  std::vector<double> s(static_cast<size_t>(n));
  JointProfile profile;
  for (std::uint64_t j = 0; j < n; ++j) {
    space.decode_into(j, profile);
    s[static_cast<size_t>(j)] = weighted_welfare(cfg, weights, profile);
  }
  return s;
}

AlphaBounds alpha0_bounds(const GameConfig& cfg, std::span<const double> S,
                          double phi, int slice, int controller) {
  cfg.validate();
  if (!(std::isfinite(phi)) || phi == 0.0)
    fail(ErrorKind::InvalidArgument, "phi must be finite and nonzero");
  StateSpace space(cfg);
  const std::uint64_t n = space.num_states();
  if (S.size() != n)
    fail(ErrorKind::InvalidArgument, "welfare vector has wrong length");
  if (slice < 0 || slice >= space.num_actions())
    fail(ErrorKind::InvalidArgument, "slice out of range");
  if (controller < 0 || controller >= cfg.n_orgs)
    fail(ErrorKind::InvalidArgument, "controller out of range");

  BlockExtremes in, out;
  JointProfile profile;
  for (std::uint64_t j = 0; j < n; ++j) {
    const double s = S[static_cast<size_t>(j)];
    BlockExtremes& block = (space.action_of(j, controller) == slice) ? in : out;
    if (!block.seen || s < block.min_s || s > block.max_s) {
      space.decode_into(j, profile);
      block.update(s, j, profile);
    }
  }
  return combine_bounds(in, out, phi, slice, /*has_indices=*/true);
}

AlphaBounds aggregate_alpha0_bounds(const GameConfig& cfg, double phi,
                                    int slice, int controller) {
  cfg.validate();
  if (!(std::isfinite(phi)) || phi == 0.0)
    fail(ErrorKind::InvalidArgument, "phi must be finite and nonzero");
  if (slice < 0 || slice > cfg.max_rounds)
    fail(ErrorKind::InvalidArgument, "slice out of range");
  if (controller < 0 || controller >= cfg.n_orgs)
    fail(ErrorKind::InvalidArgument, "controller out of range");

  // Others sorted by compute cost; ties broken by index so runs are stable.
  std::vector<int> others;
  for (int i = 0; i < cfg.n_orgs; ++i)
    if (i != controller) others.push_back(i);
  std::vector<int> cheap_first = others;
  std::sort(cheap_first.begin(), cheap_first.end(), [&](int a, int b) {
    double ba = cfg.orgs[static_cast<size_t>(a)].compute_coeff;
    double bb = cfg.orgs[static_cast<size_t>(b)].compute_coeff;
    return ba != bb ? ba < bb : a < b;
  });
  std::vector<int> dear_first(cheap_first.rbegin(), cheap_first.rend());

  StateSpace space(cfg);
  const bool indices_ok = space.countable();
  const int r = cfg.max_rounds;
  const std::int64_t t_other_max =
      static_cast<std::int64_t>(cfg.n_orgs - 1) * r;

  // For a fixed (controller action, others' total T) the welfare extremes
  // come from greedy fills: cheapest orgs loaded first maximizes S, dearest
  // first minimizes it. Linear objective over {0..r}^(N-1) with a fixed sum,
  // so the greedy corner is exact.
  auto fill_greedy = [&](const std::vector<int>& order, int action,
                         std::int64_t t, JointProfile& out) {
    out.actions.assign(static_cast<size_t>(cfg.n_orgs), 0);
    out[controller] = action;
    std::int64_t left = t;
    for (int idx : order) {
      int take = static_cast<int>(std::min<std::int64_t>(left, r));
      out[idx] = take;
      left -= take;
      if (left == 0) break;
    }
  };

  BlockExtremes in, out;
  JointProfile lo_profile, hi_profile;
  const std::vector<double> w = unit_weights(cfg.n_orgs);
  for (int action = 0; action <= r; ++action) {
    BlockExtremes& block = (action == slice) ? in : out;
    for (std::int64_t t = 0; t <= t_other_max; ++t) {
      fill_greedy(cheap_first, action, t, hi_profile);
      fill_greedy(dear_first, action, t, lo_profile);
      const double s_hi = weighted_welfare(cfg, w, hi_profile);
      const double s_lo = weighted_welfare(cfg, w, lo_profile);
      block.update(s_hi, indices_ok ? space.encode(hi_profile) : 0, hi_profile);
      block.update(s_lo, indices_ok ? space.encode(lo_profile) : 0, lo_profile);
    }
  }
  return combine_bounds(in, out, phi, slice, indices_ok);
}

AlphaBounds compute_bounds(const GameConfig& cfg, const PinningSpec& spec,
                           std::uint64_t cap) {
  validate_spec(cfg, spec);
  StateSpace space(cfg);
  const std::vector<double> w = effective_weights(cfg, spec.weights);
  if (space.enumerable(cap)) {
    std::vector<double> S = state_welfare_vector(cfg, w, cap);
    return alpha0_bounds(cfg, S, spec.phi, spec.slice, spec.controller);
  }
  if (!is_unit(w))
    fail(ErrorKind::TooLarge,
         "non-unit weights need an enumerable state space");
  return aggregate_alpha0_bounds(cfg, spec.phi, spec.slice, spec.controller);
}

namespace {

// Slice probability and completion shared by the table and rule paths.
// Returns false when the raw probability is out of range beyond tolerance.
bool fill_pinned_row(double s, int prior_own_action, double phi, double alpha0,
                     int slice, int num_actions, Completion completion,
                     std::span<double> out, double tol) {
  const double indicator = (prior_own_action == slice) ? 1.0 : 0.0;
  double p = phi * (s + alpha0) + indicator;
  if (p < -tol || p > 1.0 + tol) return false;
  p = std::min(1.0, std::max(0.0, p));
  for (double& x : out) x = 0.0;
  out[static_cast<size_t>(slice)] = p;
  const double residual = 1.0 - p;
  const int top_non_slice = (slice == num_actions - 1) ? num_actions - 2
                                                       : num_actions - 1;
  switch (completion) {
    case Completion::Uniform: {
      const double share = residual / static_cast<double>(num_actions - 1);
      for (int g = 0; g < num_actions; ++g)
        if (g != slice) out[static_cast<size_t>(g)] = share;
      break;
    }
    case Completion::TopAction:
      out[static_cast<size_t>(top_non_slice)] += residual;
      break;
    case Completion::RepeatPrior: {
      int target = prior_own_action == slice ? top_non_slice : prior_own_action;
      out[static_cast<size_t>(target)] += residual;
      break;
    }
  }
  return true;
}

}  // namespace

PinningResult synthesize(const GameConfig& cfg, const PinningSpec& spec,
                         double alpha0, std::uint64_t cap) {
  validate_spec(cfg, spec);
  if (!std::isfinite(alpha0))
    fail(ErrorKind::InvalidArgument, "alpha0 must be finite");
  StateSpace space(cfg);
  const std::vector<double> w = effective_weights(cfg, spec.weights);
  const int a = space.num_actions();

  PinningResult result{Strategy::rule(a, "mmzd",
                                      [](const JointProfile&, std::span<double>) {}),
                       alpha0, -alpha0, AlphaBounds{}, spec, false};
  result.spec.weights = w;

  if (space.enumerable(cap)) {
    std::vector<double> S = state_welfare_vector(cfg, w, cap);
    result.bounds = alpha0_bounds(cfg, S, spec.phi, spec.slice, spec.controller);
    const std::uint64_t n = space.num_states();
    std::vector<double> rows(static_cast<size_t>(n) * static_cast<size_t>(a));
    std::vector<std::uint64_t> violations;
    for (std::uint64_t j = 0; j < n; ++j) {
      std::span<double> row(rows.data() + j * static_cast<size_t>(a),
                            static_cast<size_t>(a));
      if (!fill_pinned_row(S[static_cast<size_t>(j)],
                           space.action_of(j, spec.controller), spec.phi,
                           alpha0, spec.slice, a, spec.completion, row,
                           kProbTol)) {
        violations.push_back(j);
      }
    }
    if (!violations.empty()) {
      if (violations.size() > 16) violations.resize(16);
      throw SynthesisError(
          "alpha0 = " + std::to_string(alpha0) +
              " leaves the slice probability outside [0,1] at " +
              std::to_string(violations.size()) + " state(s), first state " +
              std::to_string(violations.front()),
          violations, result.bounds);
    }
    result.strategy = Strategy::table(space, std::move(rows), "mmzd");
    result.tabular = true;
    return result;
  }

  if (!is_unit(w))
    fail(ErrorKind::TooLarge, "non-unit weights need an enumerable state space");
  result.bounds =
      aggregate_alpha0_bounds(cfg, spec.phi, spec.slice, spec.controller);
  if (alpha0 < result.bounds.alpha0_min - kBoundsTol ||
      alpha0 > result.bounds.alpha0_max + kBoundsTol) {
    std::vector<std::uint64_t> binding;
    if (result.bounds.has_state_indices) {
      binding = {result.bounds.binding_min_state, result.bounds.binding_max_state};
    }
    throw SynthesisError(
        "alpha0 = " + std::to_string(alpha0) + " outside the feasible interval [" +
            std::to_string(result.bounds.alpha0_min) + ", " +
            std::to_string(result.bounds.alpha0_max) + "]",
        binding, result.bounds);
  }
  GameConfig cfg_copy = cfg;
  const PinningSpec spec_copy = result.spec;
  const double phi = spec.phi;
  result.strategy = Strategy::rule(
      a, "mmzd",
      [cfg_copy, spec_copy, phi, alpha0, a](const JointProfile& prior,
                                            std::span<double> out) {
        const double s = weighted_welfare(cfg_copy, spec_copy.weights, prior);
        if (!fill_pinned_row(s, prior[spec_copy.controller], phi, alpha0,
                             spec_copy.slice, a, spec_copy.completion, out,
                             1e-9)) {
          fail(ErrorKind::Validation,
               "pinned slice probability left [0,1] during evaluation");
        }
      });
  result.tabular = false;
  return result;
}

PinningResult max_pinned_welfare(const GameConfig& cfg, const PinningSpec& spec,
                                 bool search_slices,
                                 std::span<const double> phi_grid,
                                 std::uint64_t cap) {
  validate_spec(cfg, spec);
  std::vector<int> slices;
  if (search_slices) {
    slices.resize(static_cast<size_t>(cfg.max_rounds) + 1);
    std::iota(slices.begin(), slices.end(), 0);
  } else {
    slices = {spec.slice};
  }
  std::vector<double> phis(phi_grid.begin(), phi_grid.end());
  if (phis.empty()) phis = {spec.phi};

  std::vector<AlphaBounds> all;
  bool found = false;
  AlphaBounds best;
  for (double phi : phis) {
    for (int g : slices) {
      PinningSpec candidate = spec;
      candidate.phi = phi;
      candidate.slice = g;
      AlphaBounds b = compute_bounds(cfg, candidate, cap);
      all.push_back(b);
      if (b.feasible && (!found || b.alpha0_min < best.alpha0_min)) {
        best = b;
        found = true;
      }
    }
  }
  if (!found) {
    throw InfeasibleError(
        "no feasible alpha0 for any tried (slice, phi): the pinning "
        "constraints are empty under this configuration",
        all);
  }
  PinningSpec chosen = spec;
  chosen.phi = best.phi;
  chosen.slice = best.slice;
  return synthesize(cfg, chosen, best.alpha0_min, cap);
}

}  // namespace silo::mmzd
