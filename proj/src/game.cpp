#include "silo/game.hpp"

#include <cmath>
#include <string>

#include "silo/state_space.hpp"

namespace silo {

namespace {

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

}  // namespace

void GameConfig::validate() const {
  if (n_orgs < 2) fail(ErrorKind::Validation, "game.n_orgs must be >= 2");
  if (local_iters < 1) fail(ErrorKind::Validation, "game.local_iters must be >= 1");
  if (max_rounds < 1) fail(ErrorKind::Validation, "game.max_rounds must be >= 1");
  if (!(std::isfinite(theta0) && theta0 > 0.0))
    fail(ErrorKind::Validation, "game.theta0 must be finite and > 0");
  if (!(std::isfinite(theta1) && theta1 > 0.0))
    fail(ErrorKind::Validation, "game.theta1 must be finite and > 0");
  if (static_cast<int>(orgs.size()) != n_orgs)
    fail(ErrorKind::Validation, "game.orgs must have exactly n_orgs entries");
  for (size_t i = 0; i < orgs.size(); ++i) {
    const OrgParams& o = orgs[i];
    if (!finite_nonneg(o.unit_revenue) || !finite_nonneg(o.compute_coeff) ||
        !finite_nonneg(o.comm_cost)) {
      fail(ErrorKind::Validation,
           "game.orgs[" + std::to_string(i) + "] fields must be finite and >= 0");
    }
  }
}

std::int64_t JointProfile::total() const {
  std::int64_t t = 0;
  for (int a : actions) t += a;
  return t;
}

void JointProfile::validate(const GameConfig& cfg) const {
  if (size() != cfg.n_orgs)
    fail(ErrorKind::Validation, "profile length does not match n_orgs");
  for (int a : actions) {
    if (a < 0 || a > cfg.max_rounds)
      fail(ErrorKind::Validation, "profile action outside {0..max_rounds}");
  }
}

double precision_baseline(const GameConfig& cfg) {
  return cfg.theta0 / cfg.theta1;
}

double model_precision(const GameConfig& cfg, std::int64_t total_participation) {
  const std::int64_t max_total =
      static_cast<std::int64_t>(cfg.n_orgs) * cfg.max_rounds;
  if (total_participation < 0 || total_participation > max_total) {
    fail(ErrorKind::InvalidArgument,
         "total participation " + std::to_string(total_participation) +
             " impossible under this config (max " + std::to_string(max_total) +
             ")");
  }
  return cfg.theta0 /
         (cfg.theta1 + static_cast<double>(cfg.local_iters) *
                           static_cast<double>(total_participation));
}

UtilityParts org_utility_parts(const GameConfig& cfg, int org,
                               const JointProfile& profile) {
  if (org < 0 || org >= cfg.n_orgs)
    fail(ErrorKind::InvalidArgument, "org index out of range");
  profile.validate(cfg);
  const OrgParams& p = cfg.orgs[static_cast<size_t>(org)];
  const double chi0 = precision_baseline(cfg);
  const double chi = model_precision(cfg, profile.total());
  UtilityParts parts;
  parts.revenue = p.unit_revenue * (chi0 - chi);
  parts.compute_cost = p.compute_coeff * static_cast<double>(cfg.local_iters) *
                       static_cast<double>(profile[org]);
  parts.comm_cost = p.comm_cost;
  parts.utility = parts.revenue - parts.compute_cost - parts.comm_cost;
  return parts;
}

double org_utility(const GameConfig& cfg, int org, const JointProfile& profile) {
  return org_utility_parts(cfg, org, profile).utility;
}

double utilities_into(const GameConfig& cfg, const JointProfile& profile,
                      std::span<double> out) {
  profile.validate(cfg);
  const double chi0 = precision_baseline(cfg);
  const double chi = model_precision(cfg, profile.total());
  const double k = static_cast<double>(cfg.local_iters);
  double sum = 0.0;
  for (int i = 0; i < cfg.n_orgs; ++i) {
    const OrgParams& p = cfg.orgs[static_cast<size_t>(i)];
    double u = p.unit_revenue * (chi0 - chi) -
               p.compute_coeff * k * static_cast<double>(profile[i]) -
               p.comm_cost;
    out[static_cast<size_t>(i)] = u;
    sum += u;
  }
  return sum;
}

double social_welfare(const GameConfig& cfg, const JointProfile& profile) {
  profile.validate(cfg);
  double sum = 0.0;
  for (int i = 0; i < cfg.n_orgs; ++i) sum += org_utility(cfg, i, profile);
  return sum;
}

std::vector<double> state_utility_vector(const GameConfig& cfg, int org,
                                         std::uint64_t cap) {
  cfg.validate();
  StateSpace space(cfg);
  if (!space.enumerable(cap))
    fail(ErrorKind::TooLarge, "state space exceeds the enumeration cap");
  const std::uint64_t n = space.num_states();
  std::vector<double> u(n);
  JointProfile profile;
  for (std::uint64_t j = 0; j < n; ++j) {
    space.decode_into(j, profile);
    u[j] = org_utility(cfg, org, profile);
  }
  return u;
}

namespace {

// Solo-training utility test: org i training y rounds alone must lose money
// for every y in {1..r}.
bool solo_condition(const GameConfig& cfg, int org) {
  const OrgParams& p = cfg.orgs[static_cast<size_t>(org)];
  const double chi0 = precision_baseline(cfg);
  const double k = static_cast<double>(cfg.local_iters);
  for (int y = 1; y <= cfg.max_rounds; ++y) {
    double solo_gain = p.unit_revenue * (chi0 - model_precision(cfg, y)) -
                       p.compute_coeff * k * static_cast<double>(y);
    if (!(solo_gain < 0.0)) return false;
  }
  return true;
}

}  // namespace

DilemmaReport analyze_dilemma(const GameConfig& cfg, std::uint64_t cap) {
  cfg.validate();
  DilemmaReport report;
  report.enumeration_cap = cap;
  report.condition_holds_per_org.resize(static_cast<size_t>(cfg.n_orgs));
  bool all_hold = true;
  for (int i = 0; i < cfg.n_orgs; ++i) {
    bool holds = solo_condition(cfg, i);
    report.condition_holds_per_org[static_cast<size_t>(i)] = holds;
    all_hold = all_hold && holds;
  }

  report.nash_profile = JointProfile::constant(cfg.n_orgs, 0);
  report.nash_welfare = social_welfare(cfg, report.nash_profile);
  report.full_participation_welfare =
      social_welfare(cfg, JointProfile::constant(cfg.n_orgs, cfg.max_rounds));
  report.premise_positive_model_value = report.full_participation_welfare > 0.0;
  // The all-zero equilibrium is only a dilemma when it actually loses welfare
  // against full participation; with zero revenue the solo condition can hold
  // while full participation is the worse outcome.
  report.is_dilemma =
      all_hold && report.nash_welfare < report.full_participation_welfare;

  StateSpace space(cfg);
  if (!space.enumerable(cap)) {
    report.certification = NashCertification::Skipped;
    return report;
  }

  // Exhaustive unilateral-deviation certificate over the whole space: no org
  // may strictly gain by deviating from all-zero, and utility must fall with
  // every extra own round at every profile (which pins all-zero as the unique
  // equilibrium when it holds).
  report.certification = NashCertification::Certified;
  JointProfile zero = report.nash_profile;
  JointProfile dev = zero;
  for (int i = 0; i < cfg.n_orgs && report.certification == NashCertification::Certified; ++i) {
    const double base = org_utility(cfg, i, zero);
    for (int y = 1; y <= cfg.max_rounds; ++y) {
      dev[i] = y;
      if (org_utility(cfg, i, dev) > base) {
        report.certification = NashCertification::Refuted;
        report.refuting_org = i;
        report.refuting_profile = dev;
        break;
      }
    }
    dev[i] = 0;
  }

  report.monotone_checked = true;
  report.monotone_decreasing = true;
  const std::uint64_t n = space.num_states();
  JointProfile profile;
  JointProfile lowered;
  for (std::uint64_t j = 0; j < n && report.monotone_decreasing; ++j) {
    space.decode_into(j, profile);
    for (int i = 0; i < cfg.n_orgs; ++i) {
      if (profile[i] == 0) continue;
      lowered = profile;
      lowered[i] = profile[i] - 1;
      if (!(org_utility(cfg, i, profile) < org_utility(cfg, i, lowered))) {
        report.monotone_decreasing = false;
        break;
      }
    }
  }
  return report;
}

}  // namespace silo
