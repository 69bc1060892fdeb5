#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "silo/game.hpp"
#include "silo/state_space.hpp"
#include "silo/strategy.hpp"

namespace silo::mmzd {

// How the controller spreads the residual mass 1 - p_slice over the other r
// actions. The choice changes trajectories but never the pinned welfare.
enum class Completion { Uniform, TopAction, RepeatPrior };

const char* completion_name(Completion c);
std::optional<Completion> parse_completion(const std::string& name);

struct PinningSpec {
  int controller = 0;           // org index (0-based)
  double phi = 0.01;            // nonzero scale of the controlled column
  int slice = 0;                // action g whose column is pinned
  std::vector<double> weights;  // per-org weights; empty means all ones
  Completion completion = Completion::Uniform;
};

// Feasible alpha0 interval for p_slice(j) = phi*(S_j + alpha0) + 1{a(j)=g}
// to stay in [0,1] across all states.
struct AlphaBounds {
  double alpha0_min = 0.0;
  double alpha0_max = 0.0;
  bool feasible = false;
  int slice = 0;
  double phi = 0.0;
  // states attaining each bound
  bool has_state_indices = false;
  std::uint64_t binding_min_state = 0;
  std::uint64_t binding_max_state = 0;
  JointProfile binding_min_profile;
  JointProfile binding_max_profile;
};

// Weighted per-state welfare sum_x w_x U^x(profile); unit weights give the
// social welfare.
double weighted_welfare(const GameConfig& cfg, std::span<const double> weights,
                        const JointProfile& profile);

// S over the whole state space, indexed by the mixed-radix encoding.
std::vector<double> state_welfare_vector(const GameConfig& cfg,
                                         std::span<const double> weights,
                                         std::uint64_t cap = kDefaultEnumerationCap);

// Enumeration form: scans the supplied S vector.
AlphaBounds alpha0_bounds(const GameConfig& cfg, std::span<const double> S,
                          double phi, int slice, int controller);

// Enumeration-free form for unit weights. S depends on the others only
// through their total participation and their cost sum, so the block extremes
// come from greedy participation assignments (cheapest-first for the maximum,
// dearest-first for the minimum) scanned over every (controller action,
// others' total) pair. Matches alpha0_bounds exactly on enumerable spaces.
AlphaBounds aggregate_alpha0_bounds(const GameConfig& cfg, double phi,
                                    int slice, int controller);

// Bounds via enumeration when the space fits under cap, aggregate otherwise
// (aggregate requires unit weights).
AlphaBounds compute_bounds(const GameConfig& cfg, const PinningSpec& spec,
                           std::uint64_t cap = kDefaultEnumerationCap);

struct PinningResult {
  Strategy strategy;
  double alpha0 = 0.0;
  double pinned_welfare = 0.0;  // -alpha0: the stationary value of sum_x w_x E^x
  AlphaBounds bounds;
  PinningSpec spec;
  bool tabular = false;
};

class InfeasibleError : public Error {
 public:
  InfeasibleError(std::string msg, std::vector<AlphaBounds> per_slice)
      : Error(ErrorKind::Infeasible, msg), per_slice_(std::move(per_slice)) {}
  const std::vector<AlphaBounds>& per_slice() const { return per_slice_; }

 private:
  std::vector<AlphaBounds> per_slice_;
};

class SynthesisError : public Error {
 public:
  SynthesisError(std::string msg, std::vector<std::uint64_t> states,
                 AlphaBounds bounds)
      : Error(ErrorKind::Infeasible, msg),
        violating_states_(std::move(states)),
        bounds_(bounds) {}
  const std::vector<std::uint64_t>& violating_states() const {
    return violating_states_;
  }
  const AlphaBounds& bounds() const { return bounds_; }

 private:
  std::vector<std::uint64_t> violating_states_;
  AlphaBounds bounds_;
};

// Materializes the controller strategy with slice probabilities
// p_j = phi*(S_j + alpha0) + 1{a(j)=slice}. Emits a full table on enumerable
// spaces and an on-demand rule otherwise. alpha0 must lie inside the bounds;
// violations raise SynthesisError with the offending states.
PinningResult synthesize(const GameConfig& cfg, const PinningSpec& spec,
                         double alpha0,
                         std::uint64_t cap = kDefaultEnumerationCap);

// Picks alpha0 = alpha0_min (the maximum welfare the controller can pin is
// -alpha0_min). Optionally searches every slice and a phi grid, returning the
// best feasible candidate; raises InfeasibleError carrying all per-slice
// bounds when nothing is feasible.
PinningResult max_pinned_welfare(const GameConfig& cfg, const PinningSpec& spec,
                                 bool search_slices = false,
                                 std::span<const double> phi_grid = {},
                                 std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace silo::mmzd
