#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "silo/error.hpp"

namespace silo {

inline constexpr std::uint64_t kDefaultEnumerationCap = 4096;

// Per-organization parameters of the collaborative training game.
struct OrgParams {
  double unit_revenue = 0.0;   // m_i: revenue per unit of model improvement
  double compute_coeff = 0.0;  // beta_i: compute cost per local iteration
  double comm_cost = 0.0;      // C_m^i: flat communication cost per task
};

// Global game parameters. An action y_i in {0..max_rounds} is the number of
// aggregation rounds organization i participates in during one task.
struct GameConfig {
  int n_orgs = 0;       // N >= 2
  int local_iters = 0;  // K >= 1, local iterations per aggregation round
  int max_rounds = 0;   // r >= 1
  double theta0 = 0.0;  // > 0
  double theta1 = 0.0;  // > 0
  std::vector<OrgParams> orgs;  // exactly N entries

  void validate() const;  // throws Error(Validation) with the offending field
};

// Joint action vector y, one entry per organization.
struct JointProfile {
  std::vector<int> actions;

  JointProfile() = default;
  explicit JointProfile(std::vector<int> a) : actions(std::move(a)) {}
  static JointProfile constant(int n_orgs, int action) {
    return JointProfile(std::vector<int>(static_cast<size_t>(n_orgs), action));
  }

  int size() const { return static_cast<int>(actions.size()); }
  int& operator[](int i) { return actions[static_cast<size_t>(i)]; }
  int operator[](int i) const { return actions[static_cast<size_t>(i)]; }
  bool operator==(const JointProfile&) const = default;

  std::int64_t total() const;
  void validate(const GameConfig& cfg) const;
};

struct UtilityParts {
  double revenue = 0.0;       // Phi_i
  double compute_cost = 0.0;  // C_p^i = beta_i * K * y_i
  double comm_cost = 0.0;     // C_m^i
  double utility = 0.0;       // revenue - compute_cost - comm_cost
};

// chi0 = theta0 / theta1, the loss of the untrained model.
double precision_baseline(const GameConfig& cfg);

// chi(total) = theta0 / (theta1 + K * total). Strictly decreasing in total.
// Rejects total_participation outside [0, N*r].
double model_precision(const GameConfig& cfg, std::int64_t total_participation);

UtilityParts org_utility_parts(const GameConfig& cfg, int org,
                               const JointProfile& profile);
double org_utility(const GameConfig& cfg, int org, const JointProfile& profile);

// Sum of org_utility over all organizations, accumulated in index order so
// that it matches a row-wise re-summation exactly.
double social_welfare(const GameConfig& cfg, const JointProfile& profile);

// Fills out[i] = U^i(profile) and returns their sum (same accumulation order
// as social_welfare).
double utilities_into(const GameConfig& cfg, const JointProfile& profile,
                      std::span<double> out);

// Per-state utility vector u^i over the full state space (org fixed),
// indexed by the mixed-radix state encoding. Throws TooLarge beyond cap.
std::vector<double> state_utility_vector(const GameConfig& cfg, int org,
                                         std::uint64_t cap = kDefaultEnumerationCap);

enum class NashCertification {
  Certified,  // no organization gains by any unilateral deviation from all-zero
  Refuted,    // a strictly profitable deviation exists (counterexample recorded)
  Skipped,    // state space above the enumeration cap
};

struct DilemmaReport {
  std::vector<bool> condition_holds_per_org;  // solo-training utility test
  JointProfile nash_profile;                  // all-zero profile
  double nash_welfare = 0.0;                  // = -sum C_m^i
  double full_participation_welfare = 0.0;    // welfare at all-r
  bool is_dilemma = false;
  bool premise_positive_model_value = false;  // full-participation welfare > 0
  NashCertification certification = NashCertification::Skipped;
  std::uint64_t enumeration_cap = 0;
  // Monotone check over the whole enumerable space: every single-round
  // reduction of any organization's action weakly raises its utility.
  bool monotone_checked = false;
  bool monotone_decreasing = false;
  int refuting_org = -1;             // set when certification == Refuted
  JointProfile refuting_profile;     // ditto
};

// Solo-training test per organization (m_i * (chi0 - chi(y)) - beta_i*K*y < 0
// for every y in {1..r}), all-zero vs all-r welfare comparison, and an
// exhaustive unilateral-deviation certificate when (r+1)^N <= cap.
DilemmaReport analyze_dilemma(const GameConfig& cfg,
                              std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace silo
