#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "silo/game.hpp"
#include "silo/state_space.hpp"
#include "silo/strategy.hpp"

namespace silo::markov {

// Dense one-step transition matrix of a joint strategy profile:
// M[v][w] = prod_i p^i(a_i(w) | v).
struct TransitionMatrix {
  StateSpace space;
  std::size_t n = 0;
  std::vector<double> m;  // row-major n x n

  double at(std::size_t v, std::size_t w) const { return m[v * n + w]; }
  double& at(std::size_t v, std::size_t w) { return m[v * n + w]; }
};

// Requires (r+1)^N <= cap; beyond that the explicit matrix is pointless and
// callers should sample trajectories instead (sim::run).
TransitionMatrix build_transition_matrix(
    const GameConfig& cfg, const std::vector<Strategy>& strategies,
    std::uint64_t cap = kDefaultEnumerationCap);

enum class StationaryMethod { NullSpace, PowerIteration, AdjugateRow };

struct StationaryResult {
  // One probability vector per recurrent class; together they span the left
  // null space of M - I. Entries clamped at -1e-12, each vector sums to 1.
  std::vector<std::vector<double>> distributions;
  int multiplicity = 0;
  StationaryMethod method = StationaryMethod::NullSpace;
  // Pivot-based rank diagnostic of (M - I)^T (computed for small matrices).
  bool rank_checked = false;
  bool rank_ambiguous = false;
  int nullity_strict = 0;  // candidate count with a 10x tighter tolerance
  int nullity_loose = 0;   // candidate count with a 10x looser tolerance
};

// Recurrent classes found structurally (strongly connected components of the
// support graph), then one GTH null-space solve per class. Residual
// ||vM - v||_inf <= 1e-8 is enforced on every returned vector.
StationaryResult stationary_distribution(const TransitionMatrix& M);

// Damped power iteration v <- (v + vM)/2 from the uniform vector. Agrees with
// the null-space solve on irreducible aperiodic chains.
std::vector<double> stationary_power(const TransitionMatrix& M,
                                     int max_iters = 200000,
                                     double tol = 1e-13);

// Any nonzero row of adj(M - I), normalized. Valid when the stationary
// distribution is unique; small matrices only (O(n^4) cofactor evaluation).
std::vector<double> stationary_adjugate(const TransitionMatrix& M);

// v . f; with f the per-state utility vector this is the stationary expected
// utility (v must be normalized).
double expected_value(std::span<const double> v, std::span<const double> f);

// The action-g column slice of M - I contributed by one organization:
// phat[j] = p^org(g | j) - 1{a_org(j) = g}. For every stationary v of any
// chain containing this strategy, v . phat = 0.
std::vector<double> controlled_column(const StateSpace& space,
                                      const Strategy& strategy, int org,
                                      int slice);

}  // namespace silo::markov
