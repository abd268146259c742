// Copyright 2026 The prompttts Authors
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


#ifndef PTTS_PTTS_H_
#define PTTS_PTTS_H_

#include <stddef.h>
#include <stdint.h>

#if defined(PTTS_BUILDING_LIBRARY)
#define PTTS_API __attribute__((visibility("default")))
#else
#define PTTS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ptts_status {
  PTTS_OK = 0,
  PTTS_ERR_INVALID_ARGUMENT = 1, /* null pointer, bad value, unknown key */
  PTTS_ERR_IO = 2,               /* unreadable or unwritable file */
  PTTS_ERR_FORMAT = 3,           /* malformed manifest, config, audio or checkpoint */
  PTTS_ERR_MODEL = 4,            /* shape or contract violation inside the model */
  PTTS_ERR_INTERNAL = 5
} ptts_status;

typedef struct ptts_config ptts_config;
typedef struct ptts_model ptts_model;

/* Message of the last failing call on this thread; never NULL. */
PTTS_API const char* ptts_last_error(void);
/* Releases strings returned through char** out-parameters. */
PTTS_API void ptts_string_free(char* s);
PTTS_API const char* ptts_version(void);

/* Run configuration: "key=value" with model.*, data.*, training.*, features.* keys. */
PTTS_API ptts_status ptts_config_create(ptts_config** out);
PTTS_API ptts_status ptts_config_load(const char* path, ptts_config** out);
PTTS_API void ptts_config_free(ptts_config* config);
PTTS_API ptts_status ptts_config_set(ptts_config* config, const char* key, const char* value);
PTTS_API ptts_status ptts_config_get(const ptts_config* config, const char* key, char** value);
PTTS_API ptts_status ptts_config_dump(const ptts_config* config, char** text);
PTTS_API ptts_status ptts_config_validate(const ptts_config* config);
PTTS_API ptts_status ptts_config_checksum(const ptts_config* config, uint64_t* checksum);
/* Every key with its description, one "key<TAB>description" per line. */
PTTS_API ptts_status ptts_config_describe(char** text);

/* Corpus pipeline. Reports are returned as text through `report`. */
PTTS_API ptts_status ptts_corpus_segment(const char* manifest, const char* out_dir, double min_s,
                                         double max_s, char** report);
PTTS_API ptts_status ptts_corpus_filter(const char* manifest, const char* out_manifest,
                                        double threshold, char** report);
PTTS_API ptts_status ptts_corpus_stats(const char* manifest, int with_pitch, int json,
                                       char** report);
PTTS_API ptts_status ptts_corpus_split(const char* manifest, const char* out_manifest,
                                       uint64_t seed, char** report);

PTTS_API ptts_status ptts_features_extract(const char* manifest, const char* cache_dir,
                                           char** report);

/* mode: "pretrain" or "finetune". */
PTTS_API ptts_status ptts_train(const ptts_config* config, const char* mode, char** report);
/* variants: comma-separated list of at least two variant names. */
PTTS_API ptts_status ptts_run_ablation(const ptts_config* config, const char* variants, int json,
                                       char** report);

PTTS_API ptts_status ptts_model_load(const char* checkpoint, ptts_model** out);
PTTS_API void ptts_model_free(ptts_model* model);
/* Number of mel bands the model produces. */
PTTS_API ptts_status ptts_model_n_mels(const ptts_model* model, int* n_mels);

typedef struct ptts_synth_request {
  const char* text;                 /* required unless phonemes is set */
  const char* phonemes;             /* optional, space-separated symbols */
  const char* timbre_ref;           /* wav path */
  const char* prosody_ref;          /* wav path */
  const char* prosody_ref_text;     /* optional */
  const char* prosody_ref_phonemes; /* optional, space-separated symbols */
  const char* prosody_ref_alignment;/* optional alignment file */
  uint64_t seed;
  int griffin_lim_iterations;       /* <= 0 selects the default of 60 */
} ptts_synth_request;

/* Writes the target-region mel (.bin) or Griffin-Lim audio (.wav). */
PTTS_API ptts_status ptts_synthesize(const ptts_model* model, const ptts_synth_request* request,
                                     const char* out_path, char** report);
/* Target-region mel into a caller buffer: frames x n_mels, row-major. Call with
   buffer NULL to query `frames`. */
PTTS_API ptts_status ptts_synthesize_mel(const ptts_model* model,
                                         const ptts_synth_request* request, double* buffer,
                                         size_t capacity, size_t* frames);

PTTS_API ptts_status ptts_eval_prosody(const char* gen_dir, const char* ref_dir, int json,
                                       const char* out_path, char** report);
PTTS_API ptts_status ptts_eval_speaker(const ptts_model* model, const char* wav_a,
                                       const char* wav_b, double* similarity);

#ifdef __cplusplus
}
#endif

#endif  // PTTS_PTTS_H_
