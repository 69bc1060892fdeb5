#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "silo/game.hpp"
#include "silo/rng.hpp"
#include "silo/state_space.hpp"

namespace silo {

enum class StrategyKind { AllC, AllD, Rand, Tft, Mixed, Mmzd };

const char* kind_name(StrategyKind kind);  // "allc", "alld", ...
std::optional<StrategyKind> parse_kind(const std::string& name);

// One-round-memory strategy: maps the previous joint outcome to a probability
// row over the r+1 actions. Either a full table over the state space or a
// rule evaluated on demand (the only option when (r+1)^N is not tabulatable).
class Strategy {
 public:
  using RowFn =
      std::function<void(const JointProfile& prior, std::span<double> out)>;

  // Takes rows as a flat num_states x (r+1) array; rows must sum to 1 within
  // 1e-12 with entries in [0,1] (tiny negatives are clamped).
  static Strategy table(const StateSpace& space, std::vector<double> rows,
                        std::string name = "table");
  static Strategy rule(int num_actions, std::string name, RowFn fn);

  int num_actions() const { return impl_->num_actions; }
  const std::string& name() const { return impl_->name; }
  bool is_table() const { return impl_->tabular; }

  void row(const JointProfile& prior, std::span<double> out) const;
  // Table access by state index (table strategies only).
  std::span<const double> table_row(std::uint64_t state) const;

 private:
  struct Impl {
    int num_actions = 0;
    std::string name;
    bool tabular = false;
    std::optional<StateSpace> space;
    std::vector<double> rows;
    RowFn fn;
  };
  explicit Strategy(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

// Throws Error(Validation) unless entries are in [0,1] and sum to 1 within tol.
void validate_row(std::span<const double> row, double tol = 1e-12);

// Samples an action from the strategy's row for `prior`. Deterministic given
// the generator state; the row is re-validated so a malformed rule surfaces
// here rather than corrupting a run.
int act(const Strategy& strategy, const JointProfile& prior, Pcg32& rng,
        std::vector<double>& scratch);
int act(const Strategy& strategy, const JointProfile& prior, Pcg32& rng);

struct BaselineKind {
  StrategyKind tag = StrategyKind::AllC;
  // Required when tag == Mixed: one concrete baseline per organization,
  // drawn from {AllC, AllD, Rand, Tft}.
  std::vector<StrategyKind> mixed_assignment;
};

// ALLD always plays 0 (submits the zero update), ALLC always plays r, Rand is
// uniform over {0..r}. TFT looks at the previous round's total T = sum y: if
// 2T < N*r it plays uniform over {0..floor(r/2)}, otherwise uniform over
// {floor((r+1)/2)..r}. Mixed delegates to the per-org assignment.
Strategy make_baseline(const BaselineKind& kind, const GameConfig& cfg, int org);

// Uniform draw from {AllC, AllD, Rand, Tft} per organization, in org order.
std::vector<StrategyKind> draw_mixed_assignment(int n_orgs, Pcg32& rng);

// Tabulates a rule strategy over the full state space (cap-checked).
std::vector<double> tabulate(const Strategy& strategy, const StateSpace& space,
                             std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace silo
