// Copyright 2026 The driveadapt Authors
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

/* C interface to the driveadapt library.
 *
 * Every fallible call returns a da_status; on failure da_last_error() holds
 * a message for the calling thread until its next failing call. Handles are
 * opaque and owned by the caller; strings returned through char** are
 * released with da_string_free. */
#ifndef DRIVEADAPT_DRIVEADAPT_H
#define DRIVEADAPT_DRIVEADAPT_H

#include <stddef.h>
#include <stdint.h>

#if defined(DRIVEADAPT_BUILDING_LIBRARY)
#define DA_API __attribute__((visibility("default")))
#else
#define DA_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum da_status {
  DA_OK = 0,
  DA_ERR_INVALID_ARGUMENT = 1, /* bad input, unknown names, malformed files */
  DA_ERR_IO = 2,               /* missing or unwritable files */
  DA_ERR_STATE = 3,            /* operation not allowed in the current state */
  DA_ERR_DOMAIN = 4,           /* numerically undefined result */
  DA_ERR_INTERNAL = 5
} da_status;

DA_API const char* da_last_error(void);
DA_API const char* da_status_name(da_status s);
DA_API const char* da_version(void);
DA_API void da_string_free(char* s);

/* Key/value configuration ("section.key = value"). */
typedef struct da_config da_config;
/* path may be NULL for an empty configuration. */
DA_API da_status da_config_load(const char* path, da_config** out);
DA_API da_status da_config_parse(const char* text, da_config** out);
/* Validates every known key and fails on keys no module recognizes. */
DA_API da_status da_config_check_unused(const da_config* cfg);
DA_API void da_config_free(da_config* cfg);

/* Synthetic cohort. */
typedef struct da_cohort_summary {
  int participants;
  int sessions;
  int events;
} da_cohort_summary;

DA_API da_status da_simulate(const da_config* cfg, uint64_t seed, const char* out_dir,
                             da_cohort_summary* summary);

/* Feature tables. windows: "gaze=1,pupil=5"; NULL or "" keeps every
 * modality at the full event. */
typedef struct da_table da_table;
DA_API da_status da_extract(const char* in_dir, const char* windows, da_table** out);
DA_API da_status da_simulate_features(const da_config* cfg, uint64_t seed, const char* windows,
                                      da_table** out);
DA_API da_status da_table_read_csv(const char* path, da_table** out);
DA_API da_status da_table_write_csv(const da_table* t, const char* path);
DA_API size_t da_table_rows(const da_table* t);
DA_API size_t da_table_columns(const da_table* t);
DA_API void da_table_free(da_table* t);

/* Classifier options; da_train_options_init reads the ml.* keys. */
typedef struct da_train_options {
  int trees;
  int max_depth;         /* 0 = unlimited */
  int max_features;      /* 0 = floor(sqrt(features)) */
  int min_samples_split;
  int folds;
  int inner_folds;
  int two_step;
  int upsample;
  uint64_t seed;
} da_train_options;

DA_API da_status da_train_options_init(const da_config* cfg, uint64_t seed,
                                       da_train_options* out);

typedef struct da_model da_model;
DA_API da_status da_train(const da_table* t, const da_train_options* opts, da_model** out);
DA_API da_status da_model_save(const da_model* m, const char* path);
DA_API da_status da_model_load(const char* path, da_model** out);
DA_API void da_model_free(da_model* m);

/* Reports. JSON outputs are required; csv outputs may be NULL. */
DA_API da_status da_evaluate(const da_model* m, const da_table* t, char** json, char** csv);
DA_API da_status da_crossval(const da_table* t, const da_train_options* opts, char** json,
                             char** csv);
DA_API da_status da_ablate(const da_table* t, const da_train_options* opts, char** json,
                           char** csv);
DA_API da_status da_select(const da_table* t, int k, const da_train_options* opts, char** json,
                           char** csv);
DA_API da_status da_analyze(const da_table* t, char** json, char** csv);

/* Per-modality window search over stream directories or a fresh cohort. */
typedef struct da_windowed da_windowed;
DA_API da_status da_extract_windowed(const char* in_dir, const double* windows, size_t n,
                                     da_windowed** out);
DA_API da_status da_simulate_windowed(const da_config* cfg, uint64_t seed, const double* windows,
                                      size_t n, da_windowed** out);
DA_API da_status da_grid_search(const da_windowed* w, const da_train_options* opts, char** json,
                                char** csv);
DA_API void da_windowed_free(da_windowed* w);

/* Interactive session driven by JSON command messages. */
typedef struct da_session_options {
  const da_config* config; /* may be NULL */
  uint64_t seed;
  int participant;
  const char* mode; /* fixed_LD, fixed_LA, trust_LD, trust_LA, pref_LD, pref_LA */
} da_session_options;

typedef struct da_live da_live;
DA_API da_status da_live_create(const da_session_options* opts, da_live** out);
/* Always yields a reply (ack or error) for a non-NULL live handle. */
DA_API da_status da_live_submit(da_live* s, const char* command, char** reply);
DA_API da_status da_live_step(da_live* s, int* ticked);
DA_API int da_live_frame_due(const da_live* s);
DA_API da_status da_live_frame(da_live* s, char** frame);
DA_API da_status da_live_hello(const da_live* s, int read_only, char** hello);
DA_API da_status da_live_record(const da_live* s, char** session_json);
DA_API void da_live_free(da_live* s);

/* WebSocket service for one interactive session. */
typedef struct da_server_options {
  da_session_options session;
  const char* address; /* NULL = 127.0.0.1 */
  unsigned short port; /* 0 = any free port */
  double time_scale;   /* <= 0 means 1 */
  const char* record_dir; /* may be NULL */
  int handle_signals;
} da_server_options;

typedef struct da_server da_server;
DA_API da_status da_server_create(const da_server_options* opts, da_server** out);
DA_API unsigned short da_server_port(const da_server* s);
/* Blocks until da_server_stop or a handled signal. */
DA_API da_status da_server_run(da_server* s);
DA_API void da_server_stop(da_server* s);
DA_API void da_server_free(da_server* s);

#ifdef __cplusplus
}
#endif

#endif /* DRIVEADAPT_DRIVEADAPT_H */
