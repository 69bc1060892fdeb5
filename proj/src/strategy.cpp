#include "silo/strategy.hpp"

#include <cmath>
#include <cstring>
#include <string>

namespace silo {

const char* kind_name(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::AllC: return "allc";
    case StrategyKind::AllD: return "alld";
    case StrategyKind::Rand: return "rand";
    case StrategyKind::Tft: return "tft";
    case StrategyKind::Mixed: return "mixed";
    case StrategyKind::Mmzd: return "mmzd";
  }
  return "?";
}

std::optional<StrategyKind> parse_kind(const std::string& name) {
  if (name == "allc") return StrategyKind::AllC;
  if (name == "alld") return StrategyKind::AllD;
  if (name == "rand") return StrategyKind::Rand;
  if (name == "tft") return StrategyKind::Tft;
  if (name == "mixed") return StrategyKind::Mixed;
  if (name == "mmzd") return StrategyKind::Mmzd;
  return std::nullopt;
}

void validate_row(std::span<const double> row, double tol) {
  double sum = 0.0;
  for (double p : row) {
    if (!(p >= -tol && p <= 1.0 + tol))
      fail(ErrorKind::Validation, "strategy row entry outside [0,1]");
    sum += p;
  }
  if (std::fabs(sum - 1.0) > tol)
    fail(ErrorKind::Validation, "strategy row does not sum to 1");
}

Strategy Strategy::table(const StateSpace& space, std::vector<double> rows,
                         std::string name) {
  const std::uint64_t n = space.num_states();
  const size_t a = static_cast<size_t>(space.num_actions());
  if (rows.size() != static_cast<size_t>(n) * a)
    fail(ErrorKind::InvalidArgument, "strategy table has wrong size");
  for (std::uint64_t j = 0; j < n; ++j) {
    std::span<double> row(rows.data() + j * a, a);
    validate_row(row);
    for (double& p : row) p = std::min(1.0, std::max(0.0, p));
  }
  auto impl = std::make_shared<Impl>();
  impl->num_actions = space.num_actions();
  impl->name = std::move(name);
  impl->tabular = true;
  impl->space = space;
  impl->rows = std::move(rows);
  return Strategy(std::move(impl));
}

Strategy Strategy::rule(int num_actions, std::string name, RowFn fn) {
  if (num_actions < 2)
    fail(ErrorKind::InvalidArgument, "strategy needs at least two actions");
  if (!fn) fail(ErrorKind::InvalidArgument, "strategy rule is empty");
  auto impl = std::make_shared<Impl>();
  impl->num_actions = num_actions;
  impl->name = std::move(name);
  impl->tabular = false;
  impl->fn = std::move(fn);
  return Strategy(std::move(impl));
}

void Strategy::row(const JointProfile& prior, std::span<double> out) const {
  if (static_cast<int>(out.size()) != impl_->num_actions)
    fail(ErrorKind::InvalidArgument, "row buffer has wrong size");
  if (impl_->tabular) {
    const std::uint64_t j = impl_->space->encode(prior);
    const size_t a = static_cast<size_t>(impl_->num_actions);
    std::memcpy(out.data(), impl_->rows.data() + j * a, a * sizeof(double));
  } else {
    for (double& p : out) p = 0.0;
    impl_->fn(prior, out);
  }
}

std::span<const double> Strategy::table_row(std::uint64_t state) const {
  if (!impl_->tabular)
    fail(ErrorKind::InvalidArgument, "table_row on a rule strategy");
  const size_t a = static_cast<size_t>(impl_->num_actions);
  return {impl_->rows.data() + state * a, a};
}

int act(const Strategy& strategy, const JointProfile& prior, Pcg32& rng,
        std::vector<double>& scratch) {
  scratch.resize(static_cast<size_t>(strategy.num_actions()));
  strategy.row(prior, scratch);
  validate_row(scratch);
  const double u = rng.next_double();
  double cum = 0.0;
  int last_positive = 0;
  for (int g = 0; g < strategy.num_actions(); ++g) {
    double p = scratch[static_cast<size_t>(g)];
    if (p <= 0.0) continue;
    cum += p;
    last_positive = g;
    if (u < cum) return g;
  }
  return last_positive;  // u fell into the rounding tail
}

int act(const Strategy& strategy, const JointProfile& prior, Pcg32& rng) {
  std::vector<double> scratch;
  return act(strategy, prior, rng, scratch);
}

namespace {

Strategy one_hot_rule(int num_actions, int action, std::string name) {
  return Strategy::rule(num_actions, std::move(name),
                        [action](const JointProfile&, std::span<double> out) {
                          out[static_cast<size_t>(action)] = 1.0;
                        });
}

}  // namespace

Strategy make_baseline(const BaselineKind& kind, const GameConfig& cfg, int org) {
  if (org < 0 || org >= cfg.n_orgs)
    fail(ErrorKind::InvalidArgument, "org index out of range");
  const int r = cfg.max_rounds;
  const int a = r + 1;
  switch (kind.tag) {
    case StrategyKind::AllD:
      return one_hot_rule(a, 0, "alld");
    case StrategyKind::AllC:
      return one_hot_rule(a, r, "allc");
    case StrategyKind::Rand:
      return Strategy::rule(a, "rand",
                            [a](const JointProfile&, std::span<double> out) {
                              const double p = 1.0 / static_cast<double>(a);
                              for (double& x : out) x = p;
                            });
    case StrategyKind::Tft: {
      const std::int64_t nr = static_cast<std::int64_t>(cfg.n_orgs) * r;
      const int lo_hi = r / 2;            // top of the low range
      const int hi_lo = (r + 1) / 2;      // bottom of the high range
      return Strategy::rule(
          a, "tft",
          [nr, lo_hi, hi_lo, r](const JointProfile& prior, std::span<double> out) {
            const std::int64_t total = prior.total();
            int from, to;
            if (2 * total < nr) {
              from = 0;
              to = lo_hi;
            } else {
              from = hi_lo;
              to = r;
            }
            const double p = 1.0 / static_cast<double>(to - from + 1);
            for (int g = from; g <= to; ++g) out[static_cast<size_t>(g)] = p;
          });
    }
    case StrategyKind::Mixed: {
      if (static_cast<int>(kind.mixed_assignment.size()) != cfg.n_orgs)
        fail(ErrorKind::InvalidArgument,
             "mixed assignment must cover every organization");
      StrategyKind tag = kind.mixed_assignment[static_cast<size_t>(org)];
      if (tag == StrategyKind::Mixed || tag == StrategyKind::Mmzd)
        fail(ErrorKind::InvalidArgument,
             "mixed assignment must draw from allc/alld/rand/tft");
      return make_baseline(BaselineKind{tag, {}}, cfg, org);
    }
    case StrategyKind::Mmzd:
      fail(ErrorKind::InvalidArgument,
           "mmzd is synthesized from a pinning spec, not a baseline");
  }
  fail(ErrorKind::Internal, "unreachable baseline kind");
}

std::vector<StrategyKind> draw_mixed_assignment(int n_orgs, Pcg32& rng) {
  static constexpr StrategyKind pool[4] = {StrategyKind::AllC, StrategyKind::AllD,
                                           StrategyKind::Rand, StrategyKind::Tft};
  std::vector<StrategyKind> assignment(static_cast<size_t>(n_orgs));
  for (auto& tag : assignment) tag = pool[rng.next_below(4)];
  return assignment;
}

std::vector<double> tabulate(const Strategy& strategy, const StateSpace& space,
                             std::uint64_t cap) {
  if (!space.enumerable(cap))
    fail(ErrorKind::TooLarge,
         "state space exceeds the enumeration cap; evaluate the strategy "
         "on demand instead");
  if (space.num_actions() != strategy.num_actions())
    fail(ErrorKind::InvalidArgument, "strategy action count mismatch");
  const std::uint64_t n = space.num_states();
  const size_t a = static_cast<size_t>(space.num_actions());
  std::vector<double> rows(static_cast<size_t>(n) * a);
  JointProfile prior;
  for (std::uint64_t j = 0; j < n; ++j) {
    space.decode_into(j, prior);
    strategy.row(prior, std::span<double>(rows.data() + j * a, a));
  }
  return rows;
}

}  // namespace silo
