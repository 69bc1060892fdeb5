#include "silo/render.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "json.hpp"

namespace silo::render {

using nlohmann::json;

std::string fmt_g(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

double round12(double x) {
  return std::strtod(fmt_g(x).c_str(), nullptr);
}

namespace {

const char* bool_name(bool b) { return b ? "true" : "false"; }

std::string actions_field(const JointProfile& p) {
  std::string s;
  for (int i = 0; i < p.size(); ++i) {
    if (i) s += '|';
    s += std::to_string(p[i]);
  }
  return s;
}

json profile_json(const JointProfile& p) {
  json arr = json::array();
  for (int i = 0; i < p.size(); ++i) arr.push_back(p[i]);
  return arr;
}

json bounds_json(const mmzd::AlphaBounds& b) {
  json j{{"slice", b.slice},
         {"phi", round12(b.phi)},
         {"alpha0_min", round12(b.alpha0_min)},
         {"alpha0_max", round12(b.alpha0_max)},
         {"feasible", b.feasible},
         {"max_pinned_welfare", round12(-b.alpha0_min)}};
  if (b.has_state_indices) {
    j["binding_min_state"] = b.binding_min_state;
    j["binding_max_state"] = b.binding_max_state;
  }
  if (b.binding_min_profile.size() > 0)
    j["binding_min_profile"] = profile_json(b.binding_min_profile);
  if (b.binding_max_profile.size() > 0)
    j["binding_max_profile"] = profile_json(b.binding_max_profile);
  return j;
}

}  // namespace

std::string render_dilemma(const GameConfig& cfg, const DilemmaReport& report,
                           io::Format format) {
  const char* cert = report.certification == NashCertification::Certified
                         ? "certified"
                         : report.certification == NashCertification::Refuted
                               ? "refuted"
                               : "skipped";
  if (format == io::Format::Json) {
    json j;
    j["n_orgs"] = cfg.n_orgs;
    j["is_dilemma"] = report.is_dilemma;
    json conds = json::array();
    for (bool b : report.condition_holds_per_org) conds.push_back(b);
    j["condition_holds_per_org"] = conds;
    j["nash_profile"] = profile_json(report.nash_profile);
    j["nash_welfare"] = round12(report.nash_welfare);
    j["full_participation_welfare"] = round12(report.full_participation_welfare);
    j["premise_positive_model_value"] = report.premise_positive_model_value;
    j["nash_certification"] = cert;
    j["enumeration_cap"] = report.enumeration_cap;
    if (report.monotone_checked)
      j["utility_decreasing_everywhere"] = report.monotone_decreasing;
    if (report.certification == NashCertification::Refuted) {
      j["refuting_org"] = report.refuting_org + 1;
      j["refuting_profile"] = profile_json(report.refuting_profile);
    }
    return j.dump(2) + "\n";
  }
  std::ostringstream out;
  out << "key,value\n";
  out << "is_dilemma," << bool_name(report.is_dilemma) << "\n";
  for (size_t i = 0; i < report.condition_holds_per_org.size(); ++i)
    out << "condition_holds_org_" << (i + 1) << ","
        << bool_name(report.condition_holds_per_org[i]) << "\n";
  out << "nash_profile," << actions_field(report.nash_profile) << "\n";
  out << "nash_welfare," << fmt_g(report.nash_welfare) << "\n";
  out << "full_participation_welfare," << fmt_g(report.full_participation_welfare)
      << "\n";
  out << "premise_positive_model_value,"
      << bool_name(report.premise_positive_model_value) << "\n";
  out << "nash_certification," << cert << "\n";
  if (report.monotone_checked)
    out << "utility_decreasing_everywhere,"
        << bool_name(report.monotone_decreasing) << "\n";
  if (report.certification == NashCertification::Refuted) {
    out << "refuting_org," << (report.refuting_org + 1) << "\n";
    out << "refuting_profile," << actions_field(report.refuting_profile) << "\n";
  }
  return out.str();
}

std::string render_bounds(const std::vector<mmzd::AlphaBounds>& rows,
                          io::Format format) {
  if (format == io::Format::Json) {
    json arr = json::array();
    for (const auto& b : rows) arr.push_back(bounds_json(b));
    json j{{"bounds", arr}};
    bool any = false;
    for (const auto& b : rows) any = any || b.feasible;
    j["any_feasible"] = any;
    return j.dump(2) + "\n";
  }
  std::ostringstream out;
  out << "slice,phi,alpha0_min,alpha0_max,feasible,max_pinned_welfare,"
         "binding_min_state,binding_max_state\n";
  for (const auto& b : rows) {
    out << b.slice << ',' << fmt_g(b.phi) << ',' << fmt_g(b.alpha0_min) << ','
        << fmt_g(b.alpha0_max) << ',' << bool_name(b.feasible) << ','
        << fmt_g(-b.alpha0_min) << ',';
    if (b.has_state_indices)
      out << b.binding_min_state << ',' << b.binding_max_state;
    else
      out << ',';
    out << "\n";
  }
  return out.str();
}

std::string render_pinning(const GameConfig& cfg,
                           const mmzd::PinningResult& result,
                           const std::string& config_hash) {
  json j;
  j["format"] = "silo-games-strategy";
  j["version"] = 1;
  j["config_hash"] = config_hash;
  j["controller"] = result.spec.controller + 1;
  j["phi"] = round12(result.spec.phi);
  j["slice"] = result.spec.slice;
  j["alpha0"] = round12(result.alpha0);
  j["pinned_welfare"] = round12(result.pinned_welfare);
  j["weights"] = result.spec.weights;
  j["completion"] = mmzd::completion_name(result.spec.completion);
  j["bounds"] = bounds_json(result.bounds);
  if (result.tabular) {
    StateSpace space(cfg);
    const std::uint64_t n = space.num_states();
    json probs = json::array();
    for (std::uint64_t s = 0; s < n; ++s)
      probs.push_back(round12(
          result.strategy.table_row(s)[static_cast<size_t>(result.spec.slice)]));
    j["representation"] = "table";
    j["table"] = json{{"num_states", n}, {"slice_probabilities", probs}};
  } else {
    j["representation"] = "closed-form";
    j["rule"] = json{
        {"description",
         "p[slice] = phi*(S(prior)+alpha0) + 1{prior[controller]==slice}; "
         "residual mass spread over the other actions by the completion rule"}};
  }
  return j.dump(2) + "\n";
}

std::string render_stationary(const StateSpace& space,
                              const markov::StationaryResult& result,
                              io::Format format) {
  const char* method = result.method == markov::StationaryMethod::NullSpace
                           ? "null-space solve"
                           : result.method == markov::StationaryMethod::PowerIteration
                                 ? "power iteration"
                                 : "adjugate row";
  if (format == io::Format::Json) {
    json j;
    j["multiplicity"] = result.multiplicity;
    j["method"] = method;
    if (result.rank_checked) {
      j["rank_ambiguous"] = result.rank_ambiguous;
      j["nullity_strict"] = result.nullity_strict;
      j["nullity_loose"] = result.nullity_loose;
    }
    json vecs = json::array();
    JointProfile profile;
    for (const auto& v : result.distributions) {
      json entries = json::array();
      for (std::size_t s = 0; s < v.size(); ++s) {
        if (v[s] == 0.0) continue;
        space.decode_into(s, profile);
        entries.push_back(json{{"state_index", s},
                               {"actions", profile_json(profile)},
                               {"probability", round12(v[s])}});
      }
      vecs.push_back(entries);
    }
    j["distributions"] = vecs;
    return j.dump(2) + "\n";
  }
  // One block of all states per stationary vector; vector boundaries are
  // where state_index wraps back to 0. Multiplicity = number of blocks.
  std::ostringstream out;
  out << "state_index,actions,probability\n";
  JointProfile profile;
  for (const auto& v : result.distributions) {
    for (std::size_t s = 0; s < v.size(); ++s) {
      space.decode_into(s, profile);
      out << s << ',' << actions_field(profile) << ',' << fmt_g(v[s]) << "\n";
    }
  }
  return out.str();
}

std::string render_trajectory(const sim::Trajectory& traj, io::Format format) {
  const int n = static_cast<int>(traj.labels.size());
  if (format == io::Format::Json) {
    json j;
    j["labels"] = traj.labels;
    j["reps"] = traj.reps;
    j["rounds"] = traj.rounds;
    json rows = json::array();
    for (const auto& row : traj.rows) {
      json utils = json::array();
      for (double u : row.utilities) utils.push_back(round12(u));
      rows.push_back(json{{"rep", row.rep},
                          {"round", row.round},
                          {"actions", row.actions},
                          {"utilities", utils},
                          {"welfare", round12(row.welfare)}});
    }
    j["rows"] = rows;
    json agg = json::object();
    json means = json::array(), stds = json::array(), running = json::array();
    for (int round = 0; round < traj.rounds; ++round) {
      means.push_back(round12(traj.round_mean[static_cast<size_t>(round)]));
      stds.push_back(round12(traj.round_std[static_cast<size_t>(round)]));
      running.push_back(round12(traj.running_mean[static_cast<size_t>(round)]));
    }
    agg["round_mean"] = means;
    agg["round_std"] = stds;
    agg["running_mean"] = running;
    j["aggregates"] = agg;
    return j.dump(2) + "\n";
  }
  std::ostringstream out;
  out << "rep,round";
  for (int i = 1; i <= n; ++i) out << ",org_" << i;
  for (int i = 1; i <= n; ++i) out << ",action_" << i;
  for (int i = 1; i <= n; ++i) out << ",utility_" << i;
  out << ",welfare\n";
  for (const auto& row : traj.rows) {
    out << row.rep << ',' << row.round;
    for (const auto& label : traj.labels) out << ',' << label;
    for (int a : row.actions) out << ',' << a;
    for (double u : row.utilities) out << ',' << fmt_g(u);
    out << ',' << fmt_g(row.welfare) << "\n";
  }
  return out.str();
}

std::string render_grid(const std::vector<sim::GridCell>& cells,
                        io::Format format) {
  if (format == io::Format::Json) {
    json arr = json::array();
    for (const auto& c : cells) {
      arr.push_back(json{{"controller", c.controller},
                         {"opponent", c.opponent},
                         {"mean_welfare", round12(c.mean_welfare)},
                         {"std_welfare", round12(c.std_welfare)},
                         {"pinned_target", round12(c.pinned_target)}});
    }
    return json{{"grid", arr}}.dump(2) + "\n";
  }
  std::ostringstream out;
  out << "controller,opponent,mean_welfare,std_welfare,pinned_target\n";
  for (const auto& c : cells) {
    out << c.controller << ',' << c.opponent << ',' << fmt_g(c.mean_welfare)
        << ',' << fmt_g(c.std_welfare) << ',' << fmt_g(c.pinned_target) << "\n";
  }
  return out.str();
}

}  // namespace silo::render
