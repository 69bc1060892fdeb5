#pragma once

#include <string>
#include <vector>

#include "silo/config.hpp"
#include "silo/game.hpp"
#include "silo/markov.hpp"
#include "silo/mmzd.hpp"
#include "silo/sim.hpp"

namespace silo::render {

// All floating-point output goes through this: %.12g, locale-independent.
std::string fmt_g(double x);
// Nearest double to the 12-significant-digit decimal, for JSON emission.
double round12(double x);

std::string render_dilemma(const GameConfig& cfg, const DilemmaReport& report,
                           io::Format format);

// One row per evaluated (slice, phi) candidate.
std::string render_bounds(const std::vector<mmzd::AlphaBounds>& rows,
                          io::Format format);

// The documented strategy file (always JSON): config hash, phi, slice,
// alpha0, bounds, and either the per-state slice probabilities or the
// closed-form rule parameters.
std::string render_pinning(const GameConfig& cfg,
                           const mmzd::PinningResult& result,
                           const std::string& config_hash);

std::string render_stationary(const StateSpace& space,
                              const markov::StationaryResult& result,
                              io::Format format);

std::string render_trajectory(const sim::Trajectory& traj, io::Format format);

std::string render_grid(const std::vector<sim::GridCell>& cells,
                        io::Format format);

}  // namespace silo::render
