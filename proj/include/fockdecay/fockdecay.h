/* SPDX-License-Identifier: Apache-2.0 */

/*
 * C interface to the fockdecay library.
 *
 * Objects are opaque handles created by fd_*_create style functions and
 * released with the matching fd_*_destroy. Every fallible function returns an
 * fd_status; on failure fd_last_error() and fd_last_error_code() describe the
 * most recent error raised on the calling thread. Mode indices are zero-based.
 */

#ifndef FOCKDECAY_FOCKDECAY_H
#define FOCKDECAY_FOCKDECAY_H

#include <stddef.h>

#if defined(FD_BUILDING_LIBRARY)
#define FD_API __attribute__((visibility("default")))
#else
#define FD_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fd_status {
  FD_OK = 0,
  FD_ERR_INVALID_ARGUMENT = 1,
  FD_ERR_OUT_OF_RANGE = 2,
  FD_ERR_TRUNCATION = 3,
  FD_ERR_CERTIFICATE = 4,
  FD_ERR_INVARIANT = 5,
  FD_ERR_CONFIG = 6,
  FD_ERR_IO = 7,
  FD_ERR_INTERNAL = 8
} fd_status;

typedef enum fd_statistics { FD_BOSON = 0, FD_FERMION = 1 } fd_statistics;

typedef struct fd_space fd_space;
typedef struct fd_model fd_model;
typedef struct fd_state fd_state;
typedef struct fd_scenario fd_scenario;

FD_API const char* fd_version(void);
FD_API const char* fd_last_error(void);
FD_API const char* fd_last_error_code(void);

/* Fock spaces. `statistics`, `masses`, `widths`, `cutoffs` have n_modes entries. */
FD_API fd_status fd_space_create(size_t n_modes, const int* statistics, const double* masses,
                                 const double* widths, const int* cutoffs, fd_space** out);
FD_API void fd_space_destroy(fd_space* space);
FD_API fd_status fd_space_dimension(const fd_space* space, size_t* out);
FD_API fd_status fd_space_index_of(const fd_space* space, const int* occupations, size_t n,
                                   size_t* out);

/* Decay models. The unmixed model takes masses and widths from the space. */
FD_API fd_status fd_model_create_unmixed(const fd_space* space, fd_model** out);
FD_API fd_status fd_model_create_mixed(const fd_space* space, double theta, double phi,
                                       double psi, double chi, double mass1, double mass2,
                                       double width1, double width2, fd_model** out);
FD_API void fd_model_destroy(fd_model* model);

/* Initial states. */
FD_API fd_status fd_state_number(const fd_space* space, const int* occupations, size_t n,
                                 fd_state** out);
FD_API fd_status fd_state_coherent(const fd_space* space, size_t mode, double alpha_re,
                                   double alpha_im, fd_state** out);
FD_API fd_status fd_state_poisson(const fd_space* space, size_t mode, double nbar,
                                  fd_state** out);
FD_API void fd_state_destroy(fd_state* state);

/* Evolution to a single time t >= 0: Kraus route and RK4 route. */
FD_API fd_status fd_evolve_kraus(const fd_model* model, const fd_state* rho0, double t,
                                 fd_state** out);
FD_API fd_status fd_evolve_ode(const fd_model* model, const fd_state* rho0, double t,
                               double step, fd_state** out);

/* <N_mode>, or the total number for mode == (size_t)-1. */
FD_API fd_status fd_state_mean_number(const fd_state* state, size_t mode, double* out);
/* Diagonal element at a flat basis index. */
FD_API fd_status fd_state_probability(const fd_state* state, size_t index, double* out);
FD_API fd_status fd_state_trace_distance(const fd_state* a, const fd_state* b, double* out);

/* Heisenberg route: tr(rho0 Lambda_t N). */
FD_API fd_status fd_heisenberg_mean_number(const fd_model* model, const fd_state* rho0,
                                           double t, double* out);

/* Scenarios. */
FD_API fd_status fd_scenario_parse(const char* json_text, fd_scenario** out);
FD_API fd_status fd_scenario_load(const char* path, fd_scenario** out);
FD_API void fd_scenario_destroy(fd_scenario* scenario);
/* Comma-separated subset of kraus,ode,heisenberg. */
FD_API fd_status fd_scenario_set_routes(fd_scenario* scenario, const char* routes);
FD_API fd_status fd_scenario_output_path(const fd_scenario* scenario, const char** out);
/* Canonical JSON; release with fd_string_free. */
FD_API fd_status fd_scenario_to_json(const fd_scenario* scenario, char** out);
FD_API fd_status fd_scenario_validate(const fd_scenario* scenario);
/* Writes CSVs and manifest.txt into out_dir (the config's output_path when NULL).
 * `max_deviation` may be NULL. */
FD_API fd_status fd_scenario_run(const fd_scenario* scenario, const char* out_dir,
                                 double* max_deviation);
FD_API void fd_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* FOCKDECAY_FOCKDECAY_H */
