#pragma once

#include <optional>
#include <string>

#include "silo/config.hpp"

namespace silo::ops {

// Subcommand drivers shared by the C API and the tests. Each renders its
// result to a string in the requested format. `infeasible` distinguishes a
// successfully computed but empty pinning interval (callers map it to their
// own signalling, e.g. exit code 2).
struct OpResult {
  std::string text;
  bool infeasible = false;
  std::string message;  // set when infeasible: what exactly failed
};

enum class BoundsMode { Auto, Enumerate, Aggregate };

OpResult run_analyze(const io::RunConfig& cfg, io::Format format);

// When all_slices is set every slice g in {0..r} is reported; otherwise only
// the configured one.
OpResult run_bounds(const io::RunConfig& cfg, BoundsMode mode, bool all_slices,
                    io::Format format);

// alpha0_override, when absent, settles on alpha0_min (maximum pinnable
// welfare). Infeasible specs return the per-slice report instead of a
// strategy file.
OpResult run_synthesize(const io::RunConfig& cfg,
                        std::optional<double> alpha0_override);

OpResult run_stationary(const io::RunConfig& cfg, io::Format format);

OpResult run_simulate(const io::RunConfig& cfg, io::Format format);

// One grid row set for a single controller kind ("mmzd", "alld", "allc",
// "rand") against the five opponent families.
OpResult run_grid_row(const io::RunConfig& cfg, const std::string& controller,
                      io::Format format);

// Worker count: explicit override > SILO_GAMES_THREADS > hardware concurrency.
int resolve_threads(int explicit_threads);

}  // namespace silo::ops
