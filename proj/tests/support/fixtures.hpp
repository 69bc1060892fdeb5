#pragma once

// Shared configs and independent oracles for the test suites. The oracles
// here deliberately avoid the engine's code paths: brute-force scans, a
// direct 4x4 determinant, and probability-grid searches.

#include <cmath>
#include <cstdint>
#include <vector>

#include "silo/game.hpp"
#include "silo/rng.hpp"
#include "silo/state_space.hpp"
#include "silo/strategy.hpp"

namespace fixtures {

// {N=2, K=5, r=1, theta0=theta1=10, m=(3,3), beta=(0.25,0.25), Cm=(0.1,0.1)}
inline silo::GameConfig c1() {
  silo::GameConfig cfg;
  cfg.n_orgs = 2;
  cfg.local_iters = 5;
  cfg.max_rounds = 1;
  cfg.theta0 = 10.0;
  cfg.theta1 = 10.0;
  cfg.orgs = {{3.0, 0.25, 0.1}, {3.0, 0.25, 0.1}};
  return cfg;
}

// {N=2, K=1, r=1, theta0=theta1=10, m=(3,3), beta=(0.4,0.4), Cm=(0.1,0.1)}
inline silo::GameConfig c2() {
  silo::GameConfig cfg;
  cfg.n_orgs = 2;
  cfg.local_iters = 1;
  cfg.max_rounds = 1;
  cfg.theta0 = 10.0;
  cfg.theta1 = 10.0;
  cfg.orgs = {{3.0, 0.4, 0.1}, {3.0, 0.4, 0.1}};
  return cfg;
}

// Large-scale config with the shipped homogeneous default org profile.
inline silo::GameConfig c3() {
  silo::GameConfig cfg;
  cfg.n_orgs = 10;
  cfg.local_iters = 200;
  cfg.max_rounds = 33;
  cfg.theta0 = 23271.584;
  cfg.theta1 = 50193.243;
  cfg.orgs.assign(10, silo::OrgParams{1.0, 1.5e-5, 0.01});
  return cfg;
}

inline silo::GameConfig zero_game(int n_orgs = 2, int r = 1) {
  silo::GameConfig cfg;
  cfg.n_orgs = n_orgs;
  cfg.local_iters = 1;
  cfg.max_rounds = r;
  cfg.theta0 = 10.0;
  cfg.theta1 = 10.0;
  cfg.orgs.assign(static_cast<size_t>(n_orgs), silo::OrgParams{0.0, 0.0, 0.0});
  return cfg;
}

// N=2, r=1 with a cheap controller: the pinning interval is a genuine
// interval, so the controller can hold welfare anywhere inside it.
inline silo::GameConfig feasible_n2r1() {
  silo::GameConfig cfg;
  cfg.n_orgs = 2;
  cfg.local_iters = 1;
  cfg.max_rounds = 1;
  cfg.theta0 = 10.0;
  cfg.theta1 = 10.0;
  cfg.orgs = {{3.0, 0.05, 0.1}, {3.0, 0.4, 0.1}};
  return cfg;
}

// Random interior strategy table: every row strictly positive, normalized.
inline silo::Strategy random_table(const silo::StateSpace& space,
                                   silo::Pcg32& rng, double floor = 0.02) {
  const std::uint64_t n = space.num_states();
  const size_t a = static_cast<size_t>(space.num_actions());
  std::vector<double> rows(static_cast<size_t>(n) * a);
  for (std::uint64_t j = 0; j < n; ++j) {
    double sum = 0.0;
    for (size_t g = 0; g < a; ++g) {
      double v = floor + rng.next_double();
      rows[j * a + g] = v;
      sum += v;
    }
    for (size_t g = 0; g < a; ++g) rows[j * a + g] /= sum;
  }
  return silo::Strategy::table(space, std::move(rows), "random");
}

// Random table that may contain structural zeros (sparser support).
inline silo::Strategy random_sparse_table(const silo::StateSpace& space,
                                          silo::Pcg32& rng) {
  const std::uint64_t n = space.num_states();
  const size_t a = static_cast<size_t>(space.num_actions());
  std::vector<double> rows(static_cast<size_t>(n) * a, 0.0);
  for (std::uint64_t j = 0; j < n; ++j) {
    double sum = 0.0;
    for (size_t g = 0; g < a; ++g) {
      double v = (rng.next_double() < 0.4) ? 0.0 : rng.next_double();
      rows[j * a + g] = v;
      sum += v;
    }
    if (sum == 0.0) {
      rows[j * a + rng.next_below(static_cast<std::uint32_t>(a))] = 1.0;
      sum = 1.0;
    }
    for (size_t g = 0; g < a; ++g) rows[j * a + g] /= sum;
  }
  return silo::Strategy::table(space, std::move(rows), "random-sparse");
}

// 4x4 determinant by cofactor expansion; used by the classical two-player
// payoff-ratio oracle.
inline double det4(const double m[4][4]) {
  auto det3 = [](double a, double b, double c, double d, double e, double f,
                 double g, double h, double i) {
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
  };
  double d = 0.0;
  for (int col = 0; col < 4; ++col) {
    double sub[9];
    int k = 0;
    for (int rr = 1; rr < 4; ++rr)
      for (int cc = 0; cc < 4; ++cc)
        if (cc != col) sub[k++] = m[rr][cc];
    const double minor = det3(sub[0], sub[1], sub[2], sub[3], sub[4], sub[5],
                              sub[6], sub[7], sub[8]);
    d += ((col % 2 == 0) ? 1.0 : -1.0) * m[0][col] * minor;
  }
  return d;
}

}  // namespace fixtures
