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


#include "ptts/ptts.h"

#include "app/ablation.hpp"
#include "app/commands.hpp"
#include "app/run_config.hpp"
#include "corpus/manifest.hpp"
#include "evaluation/metrics.hpp"
#include "features/types.hpp"
#include "features/wav_io.hpp"
#include "inference/g2p.hpp"
#include "inference/synthesizer.hpp"
#include "model/checkpoint.hpp"
#include "training/masking.hpp"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <sstream>
#include <string>

struct ptts_config {
  ptts::app::RunConfig config;
};

struct ptts_model {
  ptts::model::Checkpoint checkpoint;
};

namespace {

thread_local std::string g_last_error;

ptts_status fail(ptts_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <typename F>
ptts_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return PTTS_OK;
  } catch (const ptts::app::UsageError& e) {
    return fail(PTTS_ERR_INVALID_ARGUMENT, e.what());
  } catch (const ptts::model::ConfigError& e) {
    return fail(PTTS_ERR_INVALID_ARGUMENT, e.what());
  } catch (const ptts::inference::G2PError& e) {
    return fail(PTTS_ERR_INVALID_ARGUMENT, e.what());
  } catch (const ptts::inference::SynthesisError& e) {
    return fail(PTTS_ERR_INVALID_ARGUMENT, e.what());
  } catch (const ptts::corpus::CorpusError& e) {
    return fail(PTTS_ERR_FORMAT, e.what());
  } catch (const ptts::features::FeatureError& e) {
    return fail(PTTS_ERR_FORMAT, e.what());
  } catch (const ptts::model::ModelError& e) {
    return fail(PTTS_ERR_MODEL, e.what());
  } catch (const ptts::training::TrainingError& e) {
    return fail(PTTS_ERR_MODEL, e.what());
  } catch (const ptts::evaluation::EvaluationError& e) {
    return fail(PTTS_ERR_MODEL, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(PTTS_ERR_IO, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(PTTS_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(PTTS_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(PTTS_ERR_INTERNAL, "unknown error");
  }
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(char** out, const std::string& s) {
  if (out) *out = duplicate(s);
}

void require(const void* p, const char* what) {
  if (!p) throw ptts::app::UsageError(std::string(what) + " must not be NULL");
}

std::string str(const char* s) { return s ? s : ""; }

std::vector<std::string> words(const char* s) {
  std::vector<std::string> out;
  std::istringstream in(str(s));
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

ptts::app::SynthArgs synth_args(const ptts_synth_request* r) {
  require(r, "request");
  require(r->timbre_ref, "request->timbre_ref");
  require(r->prosody_ref, "request->prosody_ref");
  ptts::app::SynthArgs a;
  a.text = str(r->text);
  a.phonemes = words(r->phonemes);
  if (a.text.empty() && a.phonemes.empty()) {
    throw ptts::app::UsageError("request needs text or phonemes");
  }
  a.timbre_ref = r->timbre_ref;
  a.prosody_ref = r->prosody_ref;
  a.prosody_ref_text = str(r->prosody_ref_text);
  a.prosody_ref_phonemes = words(r->prosody_ref_phonemes);
  a.prosody_ref_alignment = str(r->prosody_ref_alignment);
  a.seed = r->seed;
  a.griffin_lim_iterations = r->griffin_lim_iterations > 0 ? r->griffin_lim_iterations : 60;
  return a;
}

}  // namespace

extern "C" {

const char* ptts_last_error(void) { return g_last_error.c_str(); }

void ptts_string_free(char* s) { std::free(s); }

const char* ptts_version(void) { return "0.1.0"; }

ptts_status ptts_config_create(ptts_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new ptts_config();
  });
}

ptts_status ptts_config_load(const char* path, ptts_config** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    auto cfg = ptts::app::load_run_config(path);
    *out = new ptts_config{std::move(cfg)};
  });
}

void ptts_config_free(ptts_config* config) { delete config; }

ptts_status ptts_config_set(ptts_config* config, const char* key, const char* value) {
  return guarded([&] {
    require(config, "config");
    require(key, "key");
    require(value, "value");
    ptts::app::set_key(config->config, key, value);
  });
}

ptts_status ptts_config_get(const ptts_config* config, const char* key, char** value) {
  return guarded([&] {
    require(config, "config");
    require(key, "key");
    require(value, "value");
    *value = duplicate(ptts::app::get_key(config->config, key));
  });
}

ptts_status ptts_config_dump(const ptts_config* config, char** text) {
  return guarded([&] {
    require(config, "config");
    require(text, "text");
    *text = duplicate(ptts::app::dump_run_config(config->config));
  });
}

ptts_status ptts_config_validate(const ptts_config* config) {
  return guarded([&] {
    require(config, "config");
    config->config.validate();
  });
}

ptts_status ptts_config_checksum(const ptts_config* config, uint64_t* checksum) {
  return guarded([&] {
    require(config, "config");
    require(checksum, "checksum");
    *checksum = ptts::app::config_checksum(config->config);
  });
}

ptts_status ptts_config_describe(char** text) {
  return guarded([&] {
    require(text, "text");
    std::string out;
    for (const auto& k : ptts::app::run_config_keys()) out += k.key + "\t" + k.description + "\n";
    *text = duplicate(out);
  });
}

ptts_status ptts_corpus_segment(const char* manifest, const char* out_dir, double min_s,
                                double max_s, char** report) {
  return guarded([&] {
    require(manifest, "manifest");
    require(out_dir, "out_dir");
    if (!(min_s > 0.0 && min_s < max_s)) {
      throw ptts::app::UsageError("segment window must satisfy 0 < min < max");
    }
    emit(report, ptts::app::corpus_segment({manifest, out_dir, min_s, max_s}));
  });
}

ptts_status ptts_corpus_filter(const char* manifest, const char* out_manifest, double threshold,
                               char** report) {
  return guarded([&] {
    require(manifest, "manifest");
    require(out_manifest, "out_manifest");
    emit(report, ptts::app::corpus_filter(manifest, out_manifest, threshold));
  });
}

ptts_status ptts_corpus_stats(const char* manifest, int with_pitch, int json, char** report) {
  return guarded([&] {
    require(manifest, "manifest");
    emit(report, ptts::app::corpus_stats(manifest, with_pitch != 0, json != 0));
  });
}

ptts_status ptts_corpus_split(const char* manifest, const char* out_manifest, uint64_t seed,
                              char** report) {
  return guarded([&] {
    require(manifest, "manifest");
    require(out_manifest, "out_manifest");
    emit(report, ptts::app::corpus_split(manifest, out_manifest, seed));
  });
}

ptts_status ptts_features_extract(const char* manifest, const char* cache_dir, char** report) {
  return guarded([&] {
    require(manifest, "manifest");
    require(cache_dir, "cache_dir");
    emit(report, ptts::app::features_extract(manifest, cache_dir));
  });
}

ptts_status ptts_train(const ptts_config* config, const char* mode, char** report) {
  return guarded([&] {
    require(config, "config");
    require(mode, "mode");
    emit(report, ptts::app::train(config->config, mode));
  });
}

ptts_status ptts_run_ablation(const ptts_config* config, const char* variants, int json,
                              char** report) {
  return guarded([&] {
    require(config, "config");
    require(variants, "variants");
    emit(report, ptts::app::ablation(config->config, variants, json != 0));
  });
}

ptts_status ptts_model_load(const char* checkpoint, ptts_model** out) {
  return guarded([&] {
    require(checkpoint, "checkpoint");
    require(out, "out");
    *out = nullptr;
    auto ckpt = ptts::model::load_checkpoint(checkpoint);
    *out = new ptts_model{std::move(ckpt)};
  });
}

void ptts_model_free(ptts_model* model) { delete model; }

ptts_status ptts_model_n_mels(const ptts_model* model, int* n_mels) {
  return guarded([&] {
    require(model, "model");
    require(n_mels, "n_mels");
    *n_mels = model->checkpoint.model->config().n_mels;
  });
}

ptts_status ptts_synthesize(const ptts_model* model, const ptts_synth_request* request,
                            const char* out_path, char** report) {
  return guarded([&] {
    require(model, "model");
    require(out_path, "out_path");
    const auto args = synth_args(request);
    const auto result = ptts::app::synthesize_with(model->checkpoint, args);
    emit(report, ptts::app::write_synthesis(result, out_path, args.griffin_lim_iterations,
                                            args.seed));
  });
}

ptts_status ptts_synthesize_mel(const ptts_model* model, const ptts_synth_request* request,
                                double* buffer, size_t capacity, size_t* frames) {
  return guarded([&] {
    require(model, "model");
    require(frames, "frames");
    const auto result = ptts::app::synthesize_with(model->checkpoint, synth_args(request));
    const auto& m = result.mel.values;
    *frames = static_cast<size_t>(m.rows());
    if (!buffer) return;
    const auto needed = static_cast<size_t>(m.size());
    if (capacity < needed) {
      throw ptts::app::UsageError("buffer holds " + std::to_string(capacity) + " values, " +
                                  std::to_string(needed) + " required");
    }
    std::memcpy(buffer, m.data(), needed * sizeof(double));
  });
}

ptts_status ptts_eval_prosody(const char* gen_dir, const char* ref_dir, int json,
                              const char* out_path, char** report) {
  return guarded([&] {
    require(gen_dir, "gen_dir");
    require(ref_dir, "ref_dir");
    emit(report, ptts::app::eval_prosody(gen_dir, ref_dir, json != 0, str(out_path)));
  });
}

ptts_status ptts_eval_speaker(const ptts_model* model, const char* wav_a, const char* wav_b,
                              double* similarity) {
  return guarded([&] {
    require(model, "model");
    require(wav_a, "wav_a");
    require(wav_b, "wav_b");
    require(similarity, "similarity");
    *similarity = ptts::evaluation::speaker_similarity(ptts::features::read_wav(wav_a),
                                                       ptts::features::read_wav(wav_b),
                                                       *model->checkpoint.model);
  });
}

}  // extern "C"
