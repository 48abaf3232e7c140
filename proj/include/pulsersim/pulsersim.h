// Copyright 2026 The pulsersim Authors
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


/* C interface to the pulsersim library. All functions are thread-compatible:
 * distinct handles may be used from distinct threads. On failure a function
 * returns a nonzero psim_status and psim_last_error() describes it. */

#ifndef PULSERSIM_PULSERSIM_H_
#define PULSERSIM_PULSERSIM_H_

#include <stddef.h>
#include <stdint.h>

#if defined(PSIM_BUILDING_LIBRARY)
#define PSIM_API __attribute__((visibility("default")))
#else
#define PSIM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum psim_status {
  PSIM_OK = 0,
  PSIM_ERR_CONFIG = 1,   /* bad key, value or cross-field combination */
  PSIM_ERR_RUNTIME = 2,  /* simulation or sweep failure */
  PSIM_ERR_ARGUMENT = 3, /* null handle or malformed argument */
  PSIM_ERR_IO = 4        /* file could not be read or written */
} psim_status;

typedef struct psim_config psim_config;

typedef struct psim_summary {
  int64_t median_fct_ns;
  int64_t p99_fct_ns;
  double mean_long_tput_bps;
  uint64_t drops;
  uint64_t ein_marks;
  uint64_t ce_marks;
} psim_summary;

/* Message for the last failure on the calling thread; never NULL. */
PSIM_API const char* psim_last_error(void);
PSIM_API const char* psim_version(void);

/* A config holding every default. */
PSIM_API psim_status psim_config_create(psim_config** out);
/* Parses a `section.key = value` file. */
PSIM_API psim_status psim_config_load(const char* path, psim_config** out);
PSIM_API void psim_config_destroy(psim_config* cfg);
/* Sets one key, e.g. psim_config_set(cfg, "transport.cc", "dctcp"). */
PSIM_API psim_status psim_config_set(psim_config* cfg, const char* key, const char* value);
/* Cross-field validation; the run functions also call it. */
PSIM_API psim_status psim_config_validate(const psim_config* cfg);

/* Runs the first seed of run.seeds and writes the per-run CSVs into
 * out_dir (NULL or "" disables file output). `summary` may be NULL. */
PSIM_API psim_status psim_simulate(const psim_config* cfg, const char* out_dir,
                                   psim_summary* summary);

/* Comma lists: schemes "dctcp,pulser", loads "0.2,0.4", seeds "1..5" or
 * "1,2,7". Writes one directory per run and out_dir/summary.csv. */
PSIM_API psim_status psim_sweep(const psim_config* cfg, const char* schemes, const char* loads,
                                const char* seeds, const char* out_dir);

/* Writes the flow schedule for `seed` as CSV. */
PSIM_API psim_status psim_export_flows(const psim_config* cfg, uint64_t seed,
                                       const char* path);

#ifdef __cplusplus
}
#endif

#endif /* PULSERSIM_PULSERSIM_H_ */
