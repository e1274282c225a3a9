// Copyright 2026 The stripdet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to stripdet. Every function returns a status code; on failure
 * stripdet_last_error() describes the most recent error on the calling
 * thread. Strings returned through char** are owned by the caller and must
 * be released with stripdet_string_free. */
#ifndef STRIPDET_STRIPDET_H
#define STRIPDET_STRIPDET_H

#include <stdint.h>

#if defined(STRIPDET_BUILDING_LIBRARY)
#define STRIPDET_API __attribute__((visibility("default")))
#else
#define STRIPDET_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum stripdet_status {
  STRIPDET_OK = 0,
  STRIPDET_ERR_RUNTIME = 1,
  STRIPDET_ERR_CONFIG = 2,
  STRIPDET_ERR_INVARIANT = 3,
  STRIPDET_ERR_SINGULAR = 4,
  STRIPDET_ERR_RANGE = 5,
  STRIPDET_ERR_INVALID_HANDLE = 6,
  STRIPDET_ERR_NUMERIC = 7
} stripdet_status;

typedef enum stripdet_route {
  STRIPDET_ROUTE_DIRECT = 0,
  STRIPDET_ROUTE_TRANSFER = 1,
  STRIPDET_ROUTE_SCHUR = 2
} stripdet_route;

typedef struct stripdet_spec stripdet_spec;
typedef struct stripdet_sample stripdet_sample;

STRIPDET_API const char* stripdet_version(void);
/* Message of the last failure on this thread; "" when none. */
STRIPDET_API const char* stripdet_last_error(void);
STRIPDET_API void stripdet_string_free(char* s);

/* Disorder law from JSON, e.g.
 * {"density": "uniform", "params": {"low": -2, "high": 2}, "u_law": "adjacency"}.
 * Validated for strip width `width` and band `bandwidth`. */
STRIPDET_API stripdet_status stripdet_spec_from_json(const char* json, int width, int bandwidth,
                                                     stripdet_spec** out);
STRIPDET_API stripdet_status stripdet_spec_to_json(const stripdet_spec* spec, char** out);
STRIPDET_API void stripdet_spec_free(stripdet_spec* spec);

/* One realization on [1, N] x [1, W]; deterministic in (spec, geometry, seed). */
STRIPDET_API stripdet_status stripdet_sample_draw(const stripdet_spec* spec, int width,
                                                  int bandwidth, int columns, uint64_t seed,
                                                  stripdet_sample** out);
STRIPDET_API void stripdet_sample_free(stripdet_sample* sample);
STRIPDET_API stripdet_status stripdet_sample_dims(const stripdet_sample* sample, int* width,
                                                  int* bandwidth, int* columns);
/* V at column n, row w (1-based). */
STRIPDET_API stripdet_status stripdet_sample_potential(const stripdet_sample* sample, int n,
                                                       int w, double* out);

/* det(H_N - E) of the first `columns` columns as sign * exp(log_abs);
 * sign 0 means an exact zero. */
STRIPDET_API stripdet_status stripdet_logdet(const stripdet_sample* sample, double energy,
                                             int columns, stripdet_route route, int* sign,
                                             double* log_abs);
/* All three routes with gap and tolerance, as JSON. */
STRIPDET_API stripdet_status stripdet_compare_routes(const stripdet_sample* sample,
                                                     double energy, int columns, char** json);

/* Lyapunov spectrum JSON {E, N, W, gamma, stderr, radii, gamma_sum, ...}. */
STRIPDET_API stripdet_status stripdet_lyapunov(const stripdet_spec* spec, int width,
                                               int bandwidth, double energy, long steps,
                                               uint64_t seed, char** json);

/* Checks a run config without running it. */
STRIPDET_API stripdet_status stripdet_validate_config(const char* config_json);
/* Runs a config and writes outputs plus manifest.json into out_dir. Returns
 * STRIPDET_ERR_INVARIANT (outputs written) when a check failed. `manifest`
 * may be NULL. */
STRIPDET_API stripdet_status stripdet_run(const char* config_json, const char* out_dir,
                                          char** manifest);

/* Renders a CSV table as <stem>.svg and <stem>.plot.csv in out_dir, where
 * stem is the CSV file name without extension. kind is "tail", "fit" or
 * "spectrum"; tail_rate > 0 forces the exp(-K / tail_rate) overlay. `info`
 * receives JSON {svg, data, overlay} and may be NULL. */
STRIPDET_API stripdet_status stripdet_plot(const char* csv_path, const char* kind,
                                           double tail_rate, const char* out_dir, char** info);

#ifdef __cplusplus
}
#endif

#endif /* STRIPDET_STRIPDET_H */
