#include "silo/markov.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace silo::markov {

namespace {

constexpr double kRowSumTol = 1e-10;
constexpr double kResidualTol = 1e-8;

double residual_inf(const TransitionMatrix& M, std::span<const double> v) {
  double worst = 0.0;
  for (std::size_t w = 0; w < M.n; ++w) {
    double acc = 0.0;
    for (std::size_t s = 0; s < M.n; ++s) acc += v[s] * M.at(s, w);
    worst = std::max(worst, std::fabs(acc - v[w]));
  }
  return worst;
}

void clamp_and_normalize(std::vector<double>& v) {
  double sum = 0.0;
  for (double& x : v) {
    if (x < 0.0) {
      if (x < -1e-12)
        fail(ErrorKind::Internal, "stationary entry below -1e-12");
      x = 0.0;
    }
    sum += x;
  }
  if (sum <= 0.0) fail(ErrorKind::Internal, "stationary vector sums to zero");
  for (double& x : v) x /= sum;
}

// Iterative Tarjan over the positive-support graph.
struct SccResult {
  std::vector<int> comp;  // state -> component id
  int count = 0;
};

SccResult strongly_connected_components(const TransitionMatrix& M) {
  const std::size_t n = M.n;
  SccResult res;
  res.comp.assign(n, -1);
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<std::size_t> stack;
  stack.reserve(n);
  int next_index = 0;

  struct Frame {
    std::size_t v;
    std::size_t w;  // next successor to examine
  };
  std::vector<Frame> call;

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    call.push_back({root, 0});
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      bool descended = false;
      while (f.w < n) {
        std::size_t w = f.w++;
        if (M.at(f.v, w) <= 0.0) continue;
        if (index[w] == -1) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
          descended = true;
          break;
        }
        if (on_stack[w]) low[f.v] = std::min(low[f.v], index[w]);
      }
      if (descended) continue;
      // finished f.v
      if (low[f.v] == index[f.v]) {
        for (;;) {
          std::size_t w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          res.comp[w] = res.count;
          if (w == f.v) break;
        }
        ++res.count;
      }
      std::size_t v = f.v;
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
    }
  }
  return res;
}

// Stationary distribution of an irreducible chain, Grassmann-Taksar-Heyman
// elimination (no subtractions, unconditionally stable for this problem).
std::vector<double> gth_stationary(std::vector<double>& P, std::size_t k) {
  for (std::size_t m = k - 1; m >= 1; --m) {
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) s += P[m * k + j];
    if (s <= 0.0)
      fail(ErrorKind::Internal, "GTH scale vanished on a recurrent class");
    for (std::size_t i = 0; i < m; ++i) P[i * k + m] /= s;
    for (std::size_t i = 0; i < m; ++i) {
      const double pim = P[i * k + m];
      if (pim == 0.0) continue;
      for (std::size_t j = 0; j < m; ++j) P[i * k + j] += pim * P[m * k + j];
    }
  }
  std::vector<double> x(k, 0.0);
  x[0] = 1.0;
  for (std::size_t m = 1; m < k; ++m) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) acc += x[i] * P[i * k + m];
    x[m] = acc;
  }
  double sum = 0.0;
  for (double v : x) sum += v;
  for (double& v : x) v /= sum;
  return x;
}

// Pivot profile of (M - I)^T under partial-pivot elimination: a stand-in for
// the singular-value profile, used only to flag ambiguous rank calls.
void rank_diagnostic(const TransitionMatrix& M, StationaryResult& out) {
  const std::size_t n = M.n;
  if (n > 256) return;
  std::vector<double> A(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      A[i * n + j] = M.at(j, i) - (i == j ? 1.0 : 0.0);
  std::vector<double> pivots;
  pivots.reserve(n);
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < n; ++col) {
    std::size_t best = row;
    for (std::size_t i = row + 1; i < n; ++i)
      if (std::fabs(A[i * n + col]) > std::fabs(A[best * n + col])) best = i;
    const double p = std::fabs(A[best * n + col]);
    pivots.push_back(p);
    if (p == 0.0) continue;
    if (best != row)
      for (std::size_t j = 0; j < n; ++j) std::swap(A[best * n + j], A[row * n + j]);
    for (std::size_t i = row + 1; i < n; ++i) {
      const double factor = A[i * n + col] / A[row * n + col];
      if (factor == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) A[i * n + j] -= factor * A[row * n + j];
    }
    ++row;
  }
  double pmax = 0.0;
  for (double p : pivots) pmax = std::max(pmax, p);
  out.rank_checked = true;
  if (pmax == 0.0) {  // M == I: the whole space is stationary
    out.nullity_strict = out.nullity_loose = static_cast<int>(n);
    out.rank_ambiguous = false;
    return;
  }
  const double tol = 1e-10 * pmax;
  int rank_strict = 0, rank_loose = 0;
  bool gray = false;
  for (double p : pivots) {
    if (p > 10.0 * tol) ++rank_strict;
    if (p > 0.1 * tol) ++rank_loose;
    if (p > 0.1 * tol && p <= 10.0 * tol) gray = true;
  }
  out.nullity_strict = static_cast<int>(n) - rank_strict;
  out.nullity_loose = static_cast<int>(n) - rank_loose;
  out.rank_ambiguous = gray || (out.nullity_strict != out.nullity_loose);
}

}  // namespace

TransitionMatrix build_transition_matrix(const GameConfig& cfg,
                                         const std::vector<Strategy>& strategies,
                                         std::uint64_t cap) {
  cfg.validate();
  if (static_cast<int>(strategies.size()) != cfg.n_orgs)
    fail(ErrorKind::InvalidArgument, "need one strategy per organization");
  StateSpace space(cfg);
  if (!space.enumerable(cap))
    fail(ErrorKind::TooLarge,
         "state space of size (r+1)^N exceeds the enumeration cap " +
             std::to_string(cap) +
             "; use on-the-fly simulation (sim::run) at this scale");
  const std::size_t n = static_cast<std::size_t>(space.num_states());
  const std::size_t a = static_cast<std::size_t>(space.num_actions());

  // Per-org tabulated rows, org-major.
  std::vector<std::vector<double>> tables;
  tables.reserve(strategies.size());
  for (const Strategy& s : strategies) tables.push_back(tabulate(s, space, cap));

  TransitionMatrix M{space, n, std::vector<double>(n * n, 0.0)};
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t w = 0; w < n; ++w) {
      double prod = 1.0;
      for (int i = 0; i < cfg.n_orgs && prod > 0.0; ++i) {
        const int ai = space.action_of(w, i);
        prod *= tables[static_cast<size_t>(i)][v * a + static_cast<size_t>(ai)];
      }
      M.at(v, w) = prod;
    }
    double sum = 0.0;
    for (std::size_t w = 0; w < n; ++w) sum += M.at(v, w);
    if (std::fabs(sum - 1.0) > kRowSumTol)
      fail(ErrorKind::Internal, "transition row does not sum to 1");
  }
  return M;
}

StationaryResult stationary_distribution(const TransitionMatrix& M) {
  const std::size_t n = M.n;
  if (n == 0) fail(ErrorKind::InvalidArgument, "empty transition matrix");
  StationaryResult result;
  result.method = StationaryMethod::NullSpace;

  SccResult scc = strongly_connected_components(M);
  // A component is recurrent iff no edge leaves it.
  std::vector<char> closed(static_cast<size_t>(scc.count), 1);
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t w = 0; w < n; ++w)
      if (M.at(v, w) > 0.0 && scc.comp[v] != scc.comp[w])
        closed[static_cast<size_t>(scc.comp[v])] = 0;

  for (int c = 0; c < scc.count; ++c) {
    if (!closed[static_cast<size_t>(c)]) continue;
    std::vector<std::size_t> members;
    for (std::size_t v = 0; v < n; ++v)
      if (scc.comp[v] == c) members.push_back(v);
    const std::size_t k = members.size();
    std::vector<double> sub(k * k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        sub[i * k + j] = M.at(members[i], members[j]);
    std::vector<double> pi = gth_stationary(sub, k);
    std::vector<double> v(n, 0.0);
    for (std::size_t i = 0; i < k; ++i) v[members[i]] = pi[i];
    clamp_and_normalize(v);
    if (residual_inf(M, v) > kResidualTol)
      fail(ErrorKind::Internal, "stationary residual above 1e-8");
    result.distributions.push_back(std::move(v));
  }
  // Recurrent classes are discovered in Tarjan finish order; present them in
  // ascending order of their smallest state for stable output.
  std::sort(result.distributions.begin(), result.distributions.end(),
            [](const std::vector<double>& x, const std::vector<double>& y) {
              for (std::size_t i = 0; i < x.size(); ++i) {
                bool xi = x[i] > 0.0, yi = y[i] > 0.0;
                if (xi != yi) return xi;
              }
              return false;
            });
  result.multiplicity = static_cast<int>(result.distributions.size());
  if (result.multiplicity == 0)
    fail(ErrorKind::Internal, "no recurrent class found");
  rank_diagnostic(M, result);
  return result;
}

std::vector<double> stationary_power(const TransitionMatrix& M, int max_iters,
                                     double tol) {
  const std::size_t n = M.n;
  std::vector<double> v(n, 1.0 / static_cast<double>(n)), next(n);
  for (int it = 0; it < max_iters; ++it) {
    double diff = 0.0;
    for (std::size_t w = 0; w < n; ++w) {
      double acc = 0.0;
      for (std::size_t s = 0; s < n; ++s) acc += v[s] * M.at(s, w);
      next[w] = 0.5 * (v[w] + acc);  // damped: converges on periodic chains too
      diff = std::max(diff, std::fabs(next[w] - v[w]));
    }
    v.swap(next);
    if (diff < tol) break;
  }
  clamp_and_normalize(v);
  return v;
}

namespace {

double det_lu(std::vector<double> a, std::size_t n) {
  double det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t best = col;
    for (std::size_t i = col + 1; i < n; ++i)
      if (std::fabs(a[i * n + col]) > std::fabs(a[best * n + col])) best = i;
    if (a[best * n + col] == 0.0) return 0.0;
    if (best != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[best * n + j], a[col * n + j]);
      det = -det;
    }
    det *= a[col * n + col];
    for (std::size_t i = col + 1; i < n; ++i) {
      const double f = a[i * n + col] / a[col * n + col];
      if (f == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) a[i * n + j] -= f * a[col * n + j];
    }
  }
  return det;
}

}  // namespace

std::vector<double> stationary_adjugate(const TransitionMatrix& M) {
  const std::size_t n = M.n;
  if (n > 128)
    fail(ErrorKind::TooLarge,
         "adjugate-row stationary solve is limited to 128 states");
  // adj(A) row i has entries (-1)^(i+j) det(A without row j, column i); any
  // nonzero row of adj(M - I) spans the left null space when it is 1-dim.
  std::vector<double> A(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      A[i * n + j] = M.at(i, j) - (i == j ? 1.0 : 0.0);

  std::vector<double> minor((n - 1) * (n - 1));
  std::vector<double> row(n);
  const std::size_t i = 0;  // column removed from A; any choice works
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t mr = 0;
    for (std::size_t rr = 0; rr < n; ++rr) {
      if (rr == j) continue;
      std::size_t mc = 0;
      for (std::size_t cc = 0; cc < n; ++cc) {
        if (cc == i) continue;
        minor[mr * (n - 1) + mc] = A[rr * n + cc];
        ++mc;
      }
      ++mr;
    }
    const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
    row[j] = sign * det_lu(minor, n - 1);
  }
  double sum = 0.0;
  for (double x : row) sum += x;
  if (sum == 0.0)
    fail(ErrorKind::Internal,
         "adjugate row vanished; stationary distribution is not unique");
  for (double& x : row) x /= sum;
  std::vector<double> v(row.begin(), row.end());
  clamp_and_normalize(v);
  return v;
}

double expected_value(std::span<const double> v, std::span<const double> f) {
  if (v.size() != f.size())
    fail(ErrorKind::InvalidArgument, "dimension mismatch in expected_value");
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) acc += v[i] * f[i];
  return acc;
}

std::vector<double> controlled_column(const StateSpace& space,
                                      const Strategy& strategy, int org,
                                      int slice) {
  if (org < 0 || org >= space.n_orgs())
    fail(ErrorKind::InvalidArgument, "org index out of range");
  if (slice < 0 || slice >= space.num_actions())
    fail(ErrorKind::InvalidArgument, "slice action out of range");
  const std::uint64_t n = space.num_states();
  std::vector<double> col(static_cast<size_t>(n));
  std::vector<double> row(static_cast<size_t>(space.num_actions()));
  JointProfile prior;
  for (std::uint64_t j = 0; j < n; ++j) {
    space.decode_into(j, prior);
    strategy.row(prior, row);
    const double indicator = (space.action_of(j, org) == slice) ? 1.0 : 0.0;
    col[static_cast<size_t>(j)] = row[static_cast<size_t>(slice)] - indicator;
  }
  return col;
}

}  // namespace silo::markov
