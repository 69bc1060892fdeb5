#include "silo_games.h"

#include <cstring>
#include <new>
#include <string>

#include "silo/config.hpp"
#include "silo/ops.hpp"

struct silo_engine {
  silo::io::RunConfig config;
  std::string last_error;
};

namespace {

silo_status status_of(const silo::Error& e) {
  switch (e.kind()) {
    case silo::ErrorKind::InvalidArgument: return SILO_ERROR_INVALID_ARGUMENT;
    case silo::ErrorKind::Validation: return SILO_ERROR_VALIDATION;
    case silo::ErrorKind::Parse: return SILO_ERROR_PARSE;
    case silo::ErrorKind::TooLarge: return SILO_ERROR_TOO_LARGE;
    case silo::ErrorKind::Infeasible: return SILO_ERROR_INFEASIBLE;
    case silo::ErrorKind::Io: return SILO_ERROR_IO;
    case silo::ErrorKind::Internal: return SILO_ERROR_INTERNAL;
  }
  return SILO_ERROR_INTERNAL;
}

char* copy_out(const std::string& text) {
  char* buf = new (std::nothrow) char[text.size() + 1];
  if (!buf) return nullptr;
  std::memcpy(buf, text.data(), text.size() + 1);
  return buf;
}

template <typename Fn>
silo_status guarded(silo_engine* engine, Fn&& fn) {
  if (!engine) return SILO_ERROR_INVALID_ARGUMENT;
  engine->last_error.clear();
  try {
    return fn();
  } catch (const silo::Error& e) {
    engine->last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    engine->last_error = e.what();
    return SILO_ERROR_INTERNAL;
  } catch (...) {
    engine->last_error = "unknown error";
    return SILO_ERROR_INTERNAL;
  }
}

silo::io::Format to_format(silo_format f) {
  return f == SILO_FORMAT_JSON ? silo::io::Format::Json : silo::io::Format::Csv;
}

silo_status emit(silo_engine* engine, const silo::ops::OpResult& result,
                 char** out) {
  if (!out) return SILO_ERROR_INVALID_ARGUMENT;
  *out = copy_out(result.text);
  if (!*out) {
    engine->last_error = "allocation failure";
    return SILO_ERROR_INTERNAL;
  }
  if (result.infeasible) {
    engine->last_error = result.message.empty()
                             ? "pinning constraints are infeasible"
                             : result.message;
    return SILO_ERROR_INFEASIBLE;
  }
  return SILO_OK;
}

silo_status create_engine(silo::io::RunConfig config, silo_engine** out) {
  silo_engine* engine = new (std::nothrow) silo_engine;
  if (!engine) return SILO_ERROR_INTERNAL;
  engine->config = std::move(config);
  *out = engine;
  return SILO_OK;
}

silo::JointProfile profile_from(const silo_engine* engine,
                                const int32_t* actions, int32_t n_actions) {
  if (!actions)
    silo::fail(silo::ErrorKind::InvalidArgument, "actions is null");
  if (n_actions != engine->config.game.n_orgs)
    silo::fail(silo::ErrorKind::InvalidArgument,
               "actions length must equal n_orgs");
  std::vector<int> a(actions, actions + n_actions);
  return silo::JointProfile(std::move(a));
}

}  // namespace

extern "C" {

const char* silo_version(void) { return "0.1.0"; }

namespace {

// On load failure an engine is still handed back so the caller can read the
// message through silo_engine_last_error; it must be destroyed as usual.
silo_status create_failed(const silo::Error& e, silo_engine** out) {
  silo_engine* engine = new (std::nothrow) silo_engine;
  if (engine) {
    engine->last_error = e.what();
    *out = engine;
  }
  return status_of(e);
}

}  // namespace

silo_status silo_engine_create_from_file(const char* path, silo_engine** out) {
  if (!path || !out) return SILO_ERROR_INVALID_ARGUMENT;
  *out = nullptr;
  try {
    return create_engine(silo::io::load_config_file(path), out);
  } catch (const silo::Error& e) {
    return create_failed(e, out);
  } catch (...) {
    return SILO_ERROR_INTERNAL;
  }
}

silo_status silo_engine_create_from_json(const char* json, silo_engine** out) {
  if (!json || !out) return SILO_ERROR_INVALID_ARGUMENT;
  *out = nullptr;
  try {
    return create_engine(silo::io::load_config_json(json), out);
  } catch (const silo::Error& e) {
    return create_failed(e, out);
  } catch (...) {
    return SILO_ERROR_INTERNAL;
  }
}

void silo_engine_destroy(silo_engine* engine) { delete engine; }

const char* silo_engine_last_error(const silo_engine* engine) {
  return engine ? engine->last_error.c_str() : "";
}

silo_status silo_engine_set_seed(silo_engine* engine, uint64_t seed) {
  return guarded(engine, [&] {
    engine->config.sim.seed = seed;
    return SILO_OK;
  });
}

silo_status silo_engine_set_rounds(silo_engine* engine, int32_t rounds) {
  return guarded(engine, [&] {
    if (rounds < 1) silo::fail(silo::ErrorKind::Validation, "rounds must be >= 1");
    engine->config.sim.rounds = rounds;
    if (engine->config.sim.final_window > rounds)
      engine->config.sim.final_window = rounds;
    return SILO_OK;
  });
}

silo_status silo_engine_set_reps(silo_engine* engine, int32_t reps) {
  return guarded(engine, [&] {
    if (reps < 1) silo::fail(silo::ErrorKind::Validation, "reps must be >= 1");
    engine->config.sim.reps = reps;
    return SILO_OK;
  });
}

silo_status silo_engine_set_phi(silo_engine* engine, double phi) {
  return guarded(engine, [&] {
    if (phi == 0.0) silo::fail(silo::ErrorKind::Validation, "phi must be nonzero");
    engine->config.pinning.phi = phi;
    return SILO_OK;
  });
}

silo_status silo_engine_set_slice(silo_engine* engine, int32_t slice) {
  return guarded(engine, [&] {
    if (slice < 0 || slice > engine->config.game.max_rounds)
      silo::fail(silo::ErrorKind::Validation, "slice must be in [0, max_rounds]");
    engine->config.pinning.slice = slice;
    return SILO_OK;
  });
}

silo_status silo_engine_set_threads(silo_engine* engine, int32_t threads) {
  return guarded(engine, [&] {
    if (threads < 1) silo::fail(silo::ErrorKind::Validation, "threads must be >= 1");
    engine->config.sim.threads = threads;
    return SILO_OK;
  });
}

silo_status silo_run_analyze(silo_engine* engine, silo_format format,
                             char** out) {
  return guarded(engine, [&] {
    return emit(engine, silo::ops::run_analyze(engine->config, to_format(format)),
                out);
  });
}

silo_status silo_run_bounds(silo_engine* engine, silo_bounds_mode mode,
                            int all_slices, silo_format format, char** out) {
  return guarded(engine, [&] {
    silo::ops::BoundsMode m = mode == SILO_BOUNDS_ENUMERATE
                                  ? silo::ops::BoundsMode::Enumerate
                                  : mode == SILO_BOUNDS_AGGREGATE
                                        ? silo::ops::BoundsMode::Aggregate
                                        : silo::ops::BoundsMode::Auto;
    return emit(engine,
                silo::ops::run_bounds(engine->config, m, all_slices != 0,
                                      to_format(format)),
                out);
  });
}

silo_status silo_run_synthesize(silo_engine* engine, const double* alpha0,
                                char** out) {
  return guarded(engine, [&] {
    std::optional<double> a;
    if (alpha0) a = *alpha0;
    return emit(engine, silo::ops::run_synthesize(engine->config, a), out);
  });
}

silo_status silo_run_stationary(silo_engine* engine, silo_format format,
                                char** out) {
  return guarded(engine, [&] {
    return emit(engine,
                silo::ops::run_stationary(engine->config, to_format(format)),
                out);
  });
}

silo_status silo_run_simulate(silo_engine* engine, silo_format format,
                              char** out) {
  return guarded(engine, [&] {
    return emit(engine,
                silo::ops::run_simulate(engine->config, to_format(format)),
                out);
  });
}

silo_status silo_run_grid_row(silo_engine* engine, const char* controller,
                              silo_format format, char** out) {
  return guarded(engine, [&] {
    if (!controller)
      silo::fail(silo::ErrorKind::InvalidArgument, "controller is null");
    return emit(engine,
                silo::ops::run_grid_row(engine->config, controller,
                                        to_format(format)),
                out);
  });
}

void silo_buffer_free(char* buffer) { delete[] buffer; }

silo_status silo_eval_precision(silo_engine* engine, int64_t total_participation,
                                double* out) {
  return guarded(engine, [&] {
    if (!out) return SILO_ERROR_INVALID_ARGUMENT;
    *out = silo::model_precision(engine->config.game, total_participation);
    return SILO_OK;
  });
}

silo_status silo_eval_org_utility(silo_engine* engine, int32_t org,
                                  const int32_t* actions, int32_t n_actions,
                                  double* out) {
  return guarded(engine, [&]() -> silo_status {
    if (!out) return SILO_ERROR_INVALID_ARGUMENT;
    silo::JointProfile p = profile_from(engine, actions, n_actions);
    *out = silo::org_utility(engine->config.game, org - 1, p);
    return SILO_OK;
  });
}

silo_status silo_eval_social_welfare(silo_engine* engine,
                                     const int32_t* actions, int32_t n_actions,
                                     double* out) {
  return guarded(engine, [&]() -> silo_status {
    if (!out) return SILO_ERROR_INVALID_ARGUMENT;
    silo::JointProfile p = profile_from(engine, actions, n_actions);
    *out = silo::social_welfare(engine->config.game, p);
    return SILO_OK;
  });
}

silo_status silo_eval_alpha0_bounds(silo_engine* engine, double* out_min,
                                    double* out_max, int* out_feasible) {
  return guarded(engine, [&] {
    if (!out_min || !out_max || !out_feasible)
      return SILO_ERROR_INVALID_ARGUMENT;
    silo::mmzd::AlphaBounds b = silo::mmzd::compute_bounds(
        engine->config.game, engine->config.pinning.to_spec());
    *out_min = b.alpha0_min;
    *out_max = b.alpha0_max;
    *out_feasible = b.feasible ? 1 : 0;
    return SILO_OK;
  });
}

}  // extern "C"
