/* silo_games.h - C API of the cross-silo training game engine.
 *
 * The engine evaluates the public-goods utility model of collaborative
 * model training, detects the social dilemma, synthesizes welfare-pinning
 * zero-determinant strategies, and runs seeded iterated-game tournaments.
 *
 * Usage pattern: create an engine from a JSON config (file or string), apply
 * optional overrides, call one of the silo_run_* functions, free returned
 * buffers with silo_buffer_free and the engine with silo_engine_destroy.
 *
 * Every function returns a silo_status; on failure a human-readable message
 * is available from silo_engine_last_error until the next call on the same
 * engine. Engines are not thread-safe; use one engine per thread.
 */
#ifndef SILO_GAMES_H
#define SILO_GAMES_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Opaque engine handle. */
typedef struct silo_engine silo_engine;

typedef enum {
  SILO_OK = 0,
  SILO_ERROR_INVALID_ARGUMENT = 1,
  SILO_ERROR_PARSE = 2,
  SILO_ERROR_VALIDATION = 3,
  SILO_ERROR_TOO_LARGE = 4,
  /* The pinning constraint set is empty. Renderers still produce the
   * per-slice report in *out when they return this. */
  SILO_ERROR_INFEASIBLE = 5,
  SILO_ERROR_IO = 6,
  SILO_ERROR_INTERNAL = 7
} silo_status;

typedef enum {
  SILO_FORMAT_CSV = 0,
  SILO_FORMAT_JSON = 1
} silo_format;

typedef enum {
  SILO_BOUNDS_AUTO = 0,      /* enumerate when tabulatable, else aggregate */
  SILO_BOUNDS_ENUMERATE = 1,
  SILO_BOUNDS_AGGREGATE = 2
} silo_bounds_mode;

/* Library version string, static storage. */
const char* silo_version(void);

/* Engine lifecycle. *out receives a handle on SILO_OK. On a load failure a
 * handle may still be returned solely so the error message can be read via
 * silo_engine_last_error; destroy it as usual. */
silo_status silo_engine_create_from_file(const char* path, silo_engine** out);
silo_status silo_engine_create_from_json(const char* json, silo_engine** out);
void silo_engine_destroy(silo_engine* engine);

/* Message for the most recent failed call on this engine (empty string if
 * none). Owned by the engine. */
const char* silo_engine_last_error(const silo_engine* engine);

/* Overrides applied on top of the loaded config. */
silo_status silo_engine_set_seed(silo_engine* engine, uint64_t seed);
silo_status silo_engine_set_rounds(silo_engine* engine, int32_t rounds);
silo_status silo_engine_set_reps(silo_engine* engine, int32_t reps);
silo_status silo_engine_set_phi(silo_engine* engine, double phi);
silo_status silo_engine_set_slice(silo_engine* engine, int32_t slice);
silo_status silo_engine_set_threads(silo_engine* engine, int32_t threads);

/* Operation drivers. Each allocates a NUL-terminated result into *out; free
 * it with silo_buffer_free. On SILO_ERROR_INFEASIBLE *out still carries the
 * rendered infeasibility report. */

/* Social-dilemma analysis: per-org solo-training test, all-zero vs all-r
 * welfare, Nash certification. */
silo_status silo_run_analyze(silo_engine* engine, silo_format format,
                             char** out);

/* alpha0 feasibility interval for the configured pinning spec. Set
 * all_slices to report every slice g in {0..r}. */
silo_status silo_run_bounds(silo_engine* engine, silo_bounds_mode mode,
                            int all_slices, silo_format format, char** out);

/* Synthesizes the welfare-pinning strategy and renders the strategy file
 * (always JSON). Pass alpha0 = NULL to use alpha0_min. */
silo_status silo_run_synthesize(silo_engine* engine, const double* alpha0,
                                char** out);

/* Stationary distribution(s) of the configured strategy profile. */
silo_status silo_run_stationary(silo_engine* engine, silo_format format,
                                char** out);

/* Iterated-game trajectory for the configured strategy profile. */
silo_status silo_run_simulate(silo_engine* engine, silo_format format,
                              char** out);

/* One tournament row: `controller` ("mmzd", "alld", "allc" or "rand")
 * against the five opponent families. */
silo_status silo_run_grid_row(silo_engine* engine, const char* controller,
                              silo_format format, char** out);

void silo_buffer_free(char* buffer);

/* Scalar evaluators (org indices are 1-based, as in config files). */

/* chi(total) = theta0 / (theta1 + K * total). */
silo_status silo_eval_precision(silo_engine* engine, int64_t total_participation,
                                double* out);
/* Utility of one organization at a joint action profile of length n_orgs. */
silo_status silo_eval_org_utility(silo_engine* engine, int32_t org,
                                  const int32_t* actions, int32_t n_actions,
                                  double* out);
silo_status silo_eval_social_welfare(silo_engine* engine,
                                     const int32_t* actions, int32_t n_actions,
                                     double* out);
/* alpha0 interval of the configured pinning spec; *out_feasible is 0 or 1.
 * Returns SILO_OK even when the interval is empty. */
silo_status silo_eval_alpha0_bounds(silo_engine* engine, double* out_min,
                                    double* out_max, int* out_feasible);

#ifdef __cplusplus
}
#endif

#endif /* SILO_GAMES_H */
