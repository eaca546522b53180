/*
 * Copyright 2026 The mpsum Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to the mpsum surface-code decoding library.
 *
 * Every fallible call returns an mpsum_status. On failure a description is
 * available from mpsum_last_error() on the same thread until the next call.
 * Handles are opaque; release them with the matching *_free function.
 * Strings returned through char** out-parameters are owned by the caller
 * and must be released with mpsum_string_free().
 */

#ifndef MPSUM_MPSUM_H
#define MPSUM_MPSUM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MPSUM_API __declspec(dllexport)
#else
#define MPSUM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mpsum_status {
    MPSUM_OK = 0,
    MPSUM_INVALID_ARGUMENT = 1,
    MPSUM_NO_CROSSING = 2,
    MPSUM_RUNTIME = 3,
    MPSUM_INTERRUPTED = 4
} mpsum_status;

typedef enum mpsum_boundary { MPSUM_BOUNDARY_ROTATED = 0, MPSUM_BOUNDARY_PLANAR = 1 } mpsum_boundary;

typedef enum mpsum_noise { MPSUM_NOISE_IIDXZ = 0, MPSUM_NOISE_DEPOLARIZING = 1 } mpsum_noise;

typedef enum mpsum_decoder_kind {
    MPSUM_DECODER_MANHATTAN = 0,
    MPSUM_DECODER_PATHCOUNT = 1,
    MPSUM_DECODER_BP_MULTIPATH = 2,
    MPSUM_DECODER_UNIFORM = 3
} mpsum_decoder_kind;

typedef enum mpsum_logical { MPSUM_LOGICAL_I = 0, MPSUM_LOGICAL_X = 1, MPSUM_LOGICAL_Z = 2, MPSUM_LOGICAL_Y = 3 } mpsum_logical;

typedef struct mpsum_layout mpsum_layout;
typedef struct mpsum_decoder mpsum_decoder;

MPSUM_API const char *mpsum_version(void);
MPSUM_API const char *mpsum_last_error(void);
MPSUM_API void mpsum_string_free(char *s);

/* Name lookups. Parsers accept the CLI spellings ("planar", "iidxz",
 * "pathcount", "bp-multipath") and return MPSUM_INVALID_ARGUMENT otherwise. */
MPSUM_API mpsum_status mpsum_parse_boundary(const char *name, int *out);
MPSUM_API mpsum_status mpsum_parse_noise(const char *name, int *out);
MPSUM_API mpsum_status mpsum_parse_decoder(const char *name, int *out);
MPSUM_API const char *mpsum_boundary_name(int boundary);
MPSUM_API const char *mpsum_noise_name(int noise);
MPSUM_API const char *mpsum_decoder_name(int decoder);

/* Layouts. */
MPSUM_API mpsum_status mpsum_layout_create(int distance, int boundary, mpsum_layout **out);
MPSUM_API void mpsum_layout_free(mpsum_layout *layout);
MPSUM_API size_t mpsum_layout_num_qubits(const mpsum_layout *layout);
MPSUM_API size_t mpsum_layout_num_stabilisers(const mpsum_layout *layout);
MPSUM_API mpsum_status mpsum_layout_to_json(const mpsum_layout *layout, char **json);

/* Path counting. */
typedef enum mpsum_paths_mode {
    MPSUM_PATHS_PAIR = 0,      /* between the stabilisers at from and to */
    MPSUM_PATHS_BOUNDARY = 1,  /* from the stabiliser at from to its nearest exits */
    MPSUM_PATHS_TRAVERSAL = 2  /* across the lattice; kind is 'X' or 'Z' */
} mpsum_paths_mode;

typedef struct mpsum_paths_query {
    int mode;
    int from_x, from_y;
    int to_x, to_y;
    char kind;
    /* Optional per-qubit odds; when given, path_sum is computed too. */
    const double *odds;
    size_t num_odds;
} mpsum_paths_query;

typedef struct mpsum_paths_result {
    uint64_t num_paths;
    int min_length;
    int has_sum;
    double path_sum;
} mpsum_paths_result;

MPSUM_API mpsum_status mpsum_paths(const mpsum_layout *layout, const mpsum_paths_query *query,
                                   mpsum_paths_result *out);

/* Belief-propagation trace of one qubit. `out` must hold 4 * (rounds + 1)
 * doubles: row 0 is the prior, row r the belief after round r, each in
 * I, X, Y, Z order. The error spec is "q:P;q:P" with P in {X, Y, Z}. */
MPSUM_API mpsum_status mpsum_bp_trace(const mpsum_layout *layout, int noise, double p, const char *error_spec,
                                      int rounds, uint32_t qubit, double *out);

/* Decoding single errors. Bit arrays have one byte per qubit. */
MPSUM_API mpsum_status mpsum_decoder_create(const mpsum_layout *layout, int noise, double p, int decoder,
                                            int bp_rounds, mpsum_decoder **out);
MPSUM_API void mpsum_decoder_free(mpsum_decoder *decoder);
MPSUM_API mpsum_status mpsum_decode(const mpsum_decoder *decoder, const uint8_t *x_bits, const uint8_t *z_bits,
                                    size_t num_qubits, uint8_t *correction_x, uint8_t *correction_z,
                                    int *logical_class);

/* Monte-Carlo sweeps. */
typedef struct mpsum_sweep_config {
    int boundary;
    int noise;
    int decoder;
    const int *distances;
    size_t num_distances;
    const double *ps;
    size_t num_ps;
    uint64_t trials;
    uint64_t seed;
    int workers;   /* 0 = hardware concurrency */
    int bp_rounds; /* 0 = code distance */
} mpsum_sweep_config;

typedef struct mpsum_record {
    int boundary;
    int noise;
    int decoder;
    int d;
    double p;
    uint64_t trials;
    uint64_t failures;
    double rate;
    double ci_low;
    double ci_high;
    uint64_t seed;
} mpsum_record;

typedef void (*mpsum_record_fn)(const mpsum_record *record, void *user);
/* Polled while trials run; a nonzero return stops the sweep. */
typedef int (*mpsum_stop_fn)(void *user);

MPSUM_API uint64_t mpsum_default_seed(void);

/* Calls on_record for every completed point in (d, p) order. Returns
 * MPSUM_INTERRUPTED if should_stop cut the sweep short. */
MPSUM_API mpsum_status mpsum_sweep(const mpsum_sweep_config *config, mpsum_record_fn on_record,
                                   mpsum_stop_fn should_stop, void *user);

MPSUM_API mpsum_status mpsum_confidence_interval(uint64_t failures, uint64_t trials, double level, double *low,
                                                 double *high);

typedef struct mpsum_fit {
    double p_th;
    double p_th_err;
    double nu;
    double a0, a1, a2;
    double ci_low, ci_high;
    double deviance;
    size_t n_points;
} mpsum_fit;

/* Returns MPSUM_NO_CROSSING when the curves do not cross. */
MPSUM_API mpsum_status mpsum_fit_threshold(const mpsum_record *records, size_t num_records, mpsum_fit *out);
MPSUM_API mpsum_status mpsum_fit_to_json(const mpsum_fit *fit, char **json);

#ifdef __cplusplus
}
#endif

#endif
