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


#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <deque>
#include <iostream>
#include <sstream>

namespace ptts::cli {

namespace {

struct Bound {
  std::string name;
  CLI::Option* option = nullptr;
  std::string* value = nullptr;
  bool* flag = nullptr;
};

class Builder {
 public:
  CLI::App* leaf(CLI::App* parent, const std::string& name, const std::string& description) {
    CLI::App* app = parent->add_subcommand(name, description);
    leaves_.push_back(app);
    return app;
  }

  void option(CLI::App* app, const std::string& name, const std::string& description,
              bool required = false) {
    strings_.emplace_back();
    Bound b{name, app->add_option("--" + name, strings_.back(), description), &strings_.back(),
            nullptr};
    if (required) b.option->required();
    bound_[app].push_back(b);
  }

  void many(CLI::App* app, const std::string& name, const std::string& description) {
    lists_.emplace_back();
    auto* opt = app->add_option("--" + name, lists_.back(), description);
    many_[app].push_back({name, opt, &lists_.back()});
  }

  void flag(CLI::App* app, const std::string& name, const std::string& description) {
    bools_.push_back(false);
    Bound b{name, app->add_flag("--" + name, bools_.back(), description), nullptr,
            &bools_.back()};
    bound_[app].push_back(b);
  }

  /// The parsed leaf and its ancestors' names.
  CLI::App* parsed_leaf(std::vector<std::string>& path) const {
    for (CLI::App* app : leaves_) {
      if (app->parsed()) {
        std::vector<std::string> names;
        for (CLI::App* a = app; a != nullptr && a->get_parent() != nullptr; a = a->get_parent()) {
          names.insert(names.begin(), a->get_name());
        }
        path = names;
        return app;
      }
    }
    return nullptr;
  }

  void collect(CLI::App* app, CliCommand& cmd) const {
    if (auto it = bound_.find(app); it != bound_.end()) {
      for (const Bound& b : it->second) {
        if (b.value && b.option->count() > 0) cmd.values[b.name] = *b.value;
        if (b.flag) cmd.flags[b.name] = *b.flag;
      }
    }
    if (auto it = many_.find(app); it != many_.end()) {
      for (const auto& m : it->second) {
        std::string joined;
        for (const auto& v : *m.values) joined += v + "\n";
        if (!joined.empty()) cmd.values[m.name] = joined;
      }
    }
  }

 private:
  struct Many {
    std::string name;
    CLI::Option* option;
    std::vector<std::string>* values;
  };
  std::deque<std::string> strings_;
  std::deque<std::vector<std::string>> lists_;
  std::deque<bool> bools_;
  std::vector<CLI::App*> leaves_;
  std::map<CLI::App*, std::vector<Bound>> bound_;
  std::map<CLI::App*, std::vector<Many>> many_;
};

std::string take_string(char* s) {
  std::string out = s ? s : "";
  ptts_string_free(s);
  return out;
}

std::string config_keys_help() {
  char* text = nullptr;
  if (ptts_config_describe(&text) != PTTS_OK) return {};
  std::string out = "\nConfig keys (config file lines or --set key=value):\n";
  std::istringstream in(take_string(text));
  std::string line;
  while (std::getline(in, line)) {
    const auto tab = line.find('\t');
    char buf[256];
    std::snprintf(buf, sizeof buf, "  %-32s %s\n", line.substr(0, tab).c_str(),
                  line.substr(tab + 1).c_str());
    out += buf;
  }
  return out;
}

void train_options(Builder& b, CLI::App* app) {
  b.option(app, "config", "config file (key=value lines)", true);
  b.many(app, "set", "override a config key: key=value (repeatable)");
  b.option(app, "seed", "root seed (training.seed)");
  b.option(app, "steps", "training.steps");
  b.option(app, "run-dir", "data.run_dir");
  b.option(app, "manifest", "data.manifest");
  b.option(app, "variant", "model.variant");
  b.option(app, "init-checkpoint", "data.init_checkpoint");
  b.flag(app, "dump-config", "print the effective config and exit");
  app->footer(config_keys_help());
}

// Applies the config file and overrides; returns an error message or "".
std::string build_config(CliCommand& cmd) {
  ptts_config* raw = nullptr;
  if (ptts_config_load(cmd.value("config").c_str(), &raw) != PTTS_OK) return ptts_last_error();
  cmd.config.reset(raw);
  std::vector<std::pair<std::string, std::string>> sets;
  std::istringstream in(cmd.value("set"));
  std::string item;
  while (std::getline(in, item)) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) return "--set expects key=value, got '" + item + "'";
    sets.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }
  const std::pair<const char*, const char*> dedicated[] = {
      {"seed", "training.seed"},       {"steps", "training.steps"},
      {"run-dir", "data.run_dir"},     {"manifest", "data.manifest"},
      {"variant", "model.variant"},    {"init-checkpoint", "data.init_checkpoint"}};
  for (const auto& [flag, key] : dedicated) {
    if (cmd.values.count(flag)) sets.emplace_back(key, cmd.values.at(flag));
  }
  for (const auto& [key, value] : sets) {
    if (ptts_config_set(cmd.config.get(), key.c_str(), value.c_str()) != PTTS_OK) {
      return ptts_last_error();
    }
  }
  return {};
}

}  // namespace

ParseResult parse_cli(int argc, const char* const* argv) {
  ParseResult result;
  CLI::App app{"prompttts: prosody-prompted text-to-speech toolkit", "prompttts"};
  app.require_subcommand(1);
  Builder b;

  CLI::App* corpus = app.add_subcommand("corpus", "corpus preparation")->require_subcommand(1);
  CLI::App* seg = b.leaf(corpus, "segment", "cut aligned utterances into 5-10 s segments");
  b.option(seg, "manifest", "input manifest with token alignments", true);
  b.option(seg, "out-dir", "directory for segment audio, alignments and segments.jsonl", true);
  b.option(seg, "min", "shortest admissible segment in seconds (default 5)");
  b.option(seg, "max", "longest admissible segment in seconds (default 10)");
  CLI::App* filt = b.leaf(corpus, "filter", "drop clips whose ASR transcript disagrees with the text");
  b.option(filt, "manifest", "input manifest", true);
  b.option(filt, "out", "kept entries manifest", true);
  b.option(filt, "threshold", "minimum similarity kept (default 0.8)");
  CLI::App* stats = b.leaf(corpus, "stats", "per-scene hours, clips, speed and pitch statistics");
  b.option(stats, "manifest", "input manifest", true);
  b.flag(stats, "with-pitch", "extract pitch from audio for the pitch columns");
  b.flag(stats, "json", "machine-readable output");
  CLI::App* split = b.leaf(corpus, "split", "hold out one test speaker per scene");
  b.option(split, "manifest", "input manifest", true);
  b.option(split, "out", "output manifest with split labels", true);
  b.option(split, "seed", "seed for speaker choice", true);

  CLI::App* feats = app.add_subcommand("features", "acoustic features")->require_subcommand(1);
  CLI::App* extract = b.leaf(feats, "extract", "compute and cache mel, pitch and energy");
  b.option(extract, "manifest", "input manifest", true);
  b.option(extract, "cache-dir", "cache directory (default: PTTS_CACHE_DIR)");

  CLI::App* train = app.add_subcommand("train", "training")->require_subcommand(1);
  CLI::App* pre = b.leaf(train, "pretrain", "masked prosody prediction pretraining");
  train_options(b, pre);
  CLI::App* fine = b.leaf(train, "finetune", "finetune with frozen text encoders");
  train_options(b, fine);
  CLI::App* abl = b.leaf(train, "ablation", "train and compare model variants");
  train_options(b, abl);
  b.option(abl, "variants", "comma-separated variant names (at least two)", true);
  b.flag(abl, "json", "machine-readable report");

  CLI::App* syn = b.leaf(&app, "synth", "synthesise speech from text with prosody prompting");
  b.option(syn, "checkpoint", "trained checkpoint", true);
  b.option(syn, "text", "text to speak");
  b.option(syn, "phonemes", "space-separated phonemes (bypasses G2P)");
  b.option(syn, "timbre-ref", "reference audio for the voice", true);
  b.option(syn, "prosody-ref", "reference audio for the prosody prompt", true);
  b.option(syn, "prosody-ref-text", "transcript of the prosody reference");
  b.option(syn, "prosody-ref-phonemes", "space-separated phonemes of the prosody reference");
  b.option(syn, "prosody-ref-alignment", "alignment file of the prosody reference");
  b.option(syn, "seed", "sampling seed", true);
  b.option(syn, "out", "output .bin (mel) or .wav", true);
  b.option(syn, "gl-iters", "Griffin-Lim iterations for .wav output (default 60)");

  CLI::App* eval = app.add_subcommand("eval", "objective evaluation")->require_subcommand(1);
  CLI::App* pros = b.leaf(eval, "prosody", "pitch and energy statistic differences");
  b.option(pros, "gen", "directory of generated .wav files", true);
  b.option(pros, "ref", "directory of same-named reference .wav files", true);
  b.option(pros, "out", "also write the report here");
  b.flag(pros, "json", "machine-readable output");
  CLI::App* spk = b.leaf(eval, "speaker", "speaker similarity of two clips");
  b.option(spk, "checkpoint", "trained checkpoint", true);
  b.option(spk, "a", "first clip", true);
  b.option(spk, "b", "second clip", true);
  b.flag(spk, "json", "machine-readable output");

  std::ostringstream out, err;
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    result.exit_code = app.exit(e, out, err);
    result.out = out.str();
    result.err = err.str();
    if (e.get_exit_code() != 0) result.exit_code = 2;  // every parse failure is a usage error
    return result;
  }

  CLI::App* leaf = b.parsed_leaf(result.command.path);
  if (leaf == nullptr) {
    result.exit_code = 2;
    result.err = "no command given\n" + app.help();
    return result;
  }
  b.collect(leaf, result.command);
  if (result.command.path.front() == "train") {
    const std::string problem = build_config(result.command);
    if (!problem.empty()) {
      result.exit_code = 2;
      result.err = "usage error: " + problem + "\n";
    }
  }
  return result;
}

namespace {

int report(ptts_status status, char* text) {
  if (status != PTTS_OK) {
    std::cerr << "error: " << ptts_last_error() << '\n';
    ptts_string_free(text);
    return status == PTTS_ERR_INVALID_ARGUMENT ? 2 : 1;
  }
  std::cout << take_string(text);
  return 0;
}

bool parse_number(const std::string& s, double& out) {
  try {
    std::size_t pos = 0;
    out = std::stod(s, &pos);
    return pos == s.size();
  } catch (const std::exception&) {
    return false;
  }
}

bool parse_u64(const std::string& s, std::uint64_t& out) {
  try {
    std::size_t pos = 0;
    if (s.empty() || s[0] == '-') return false;
    out = std::stoull(s, &pos);
    return pos == s.size();
  } catch (const std::exception&) {
    return false;
  }
}

int usage(const std::string& message) {
  std::cerr << "usage error: " << message << '\n';
  return 2;
}

}  // namespace

int run_command(const CliCommand& cmd) {
  const auto& p = cmd.path;
  const std::string head = p.at(0);
  const std::string sub = p.size() > 1 ? p[1] : "";
  char* text = nullptr;

  if (head == "corpus") {
    const std::string manifest = cmd.value("manifest");
    if (sub == "segment") {
      double lo = 5.0, hi = 10.0;
      if (cmd.values.count("min") && !parse_number(cmd.value("min"), lo)) {
        return usage("--min expects a number");
      }
      if (cmd.values.count("max") && !parse_number(cmd.value("max"), hi)) {
        return usage("--max expects a number");
      }
      return report(ptts_corpus_segment(manifest.c_str(), cmd.value("out-dir").c_str(), lo, hi,
                                        &text),
                    text);
    }
    if (sub == "filter") {
      double threshold = 0.8;
      if (cmd.values.count("threshold") && !parse_number(cmd.value("threshold"), threshold)) {
        return usage("--threshold expects a number");
      }
      return report(ptts_corpus_filter(manifest.c_str(), cmd.value("out").c_str(), threshold,
                                       &text),
                    text);
    }
    if (sub == "stats") {
      return report(ptts_corpus_stats(manifest.c_str(), cmd.flag("with-pitch"), cmd.flag("json"),
                                      &text),
                    text);
    }
    if (sub == "split") {
      std::uint64_t seed = 0;
      if (!parse_u64(cmd.value("seed"), seed)) return usage("--seed expects a non-negative integer");
      return report(ptts_corpus_split(manifest.c_str(), cmd.value("out").c_str(), seed, &text),
                    text);
    }
  }
  if (head == "features" && sub == "extract") {
    std::string cache = cmd.value("cache-dir");
    if (cache.empty()) {
      const char* env = std::getenv("PTTS_CACHE_DIR");
      cache = env ? env : "";
    }
    if (cache.empty()) return usage("--cache-dir or PTTS_CACHE_DIR is required");
    return report(ptts_features_extract(cmd.value("manifest").c_str(), cache.c_str(), &text),
                  text);
  }
  if (head == "train") {
    if (cmd.flag("dump-config")) {
      return report(ptts_config_dump(cmd.config.get(), &text), text);
    }
    if (sub == "ablation") {
      return report(ptts_run_ablation(cmd.config.get(), cmd.value("variants").c_str(),
                                      cmd.flag("json"), &text),
                    text);
    }
    return report(ptts_train(cmd.config.get(), sub.c_str(), &text), text);
  }
  if (head == "synth") {
    std::uint64_t seed = 0;
    if (!parse_u64(cmd.value("seed"), seed)) return usage("--seed expects a non-negative integer");
    int iterations = 0;
    if (cmd.values.count("gl-iters")) {
      double v = 0;
      if (!parse_number(cmd.value("gl-iters"), v) || v < 1) {
        return usage("--gl-iters expects a positive integer");
      }
      iterations = static_cast<int>(v);
    }
    if (cmd.value("text").empty() && cmd.value("phonemes").empty()) {
      return usage("--text or --phonemes is required");
    }
    ptts_model* model = nullptr;
    if (ptts_model_load(cmd.value("checkpoint").c_str(), &model) != PTTS_OK) {
      std::cerr << "error: " << ptts_last_error() << '\n';
      return 1;
    }
    const std::string text_v = cmd.value("text"), ph = cmd.value("phonemes"),
                      tr = cmd.value("timbre-ref"), pr = cmd.value("prosody-ref"),
                      prt = cmd.value("prosody-ref-text"), prp = cmd.value("prosody-ref-phonemes"),
                      pra = cmd.value("prosody-ref-alignment");
    ptts_synth_request req{};
    req.text = text_v.c_str();
    req.phonemes = ph.empty() ? nullptr : ph.c_str();
    req.timbre_ref = tr.c_str();
    req.prosody_ref = pr.c_str();
    req.prosody_ref_text = prt.empty() ? nullptr : prt.c_str();
    req.prosody_ref_phonemes = prp.empty() ? nullptr : prp.c_str();
    req.prosody_ref_alignment = pra.empty() ? nullptr : pra.c_str();
    req.seed = seed;
    req.griffin_lim_iterations = iterations;
    const int code = report(ptts_synthesize(model, &req, cmd.value("out").c_str(), &text), text);
    ptts_model_free(model);
    return code;
  }
  if (head == "eval") {
    if (sub == "prosody") {
      const std::string out = cmd.value("out");
      return report(ptts_eval_prosody(cmd.value("gen").c_str(), cmd.value("ref").c_str(),
                                      cmd.flag("json"), out.empty() ? nullptr : out.c_str(),
                                      &text),
                    text);
    }
    if (sub == "speaker") {
      ptts_model* model = nullptr;
      if (ptts_model_load(cmd.value("checkpoint").c_str(), &model) != PTTS_OK) {
        std::cerr << "error: " << ptts_last_error() << '\n';
        return 1;
      }
      double sim = 0.0;
      const ptts_status st = ptts_eval_speaker(model, cmd.value("a").c_str(),
                                               cmd.value("b").c_str(), &sim);
      ptts_model_free(model);
      if (st != PTTS_OK) {
        std::cerr << "error: " << ptts_last_error() << '\n';
        return st == PTTS_ERR_INVALID_ARGUMENT ? 2 : 1;
      }
      char buf[96];
      if (cmd.flag("json")) {
        std::snprintf(buf, sizeof buf, "{\"similarity\": %.9f}\n", sim);
      } else {
        std::snprintf(buf, sizeof buf, "similarity %.6f\n", sim);
      }
      std::cout << buf;
      return 0;
    }
  }
  return usage("unknown command");
}

int main_entry(int argc, const char* const* argv) {
  ParseResult parsed = parse_cli(argc, argv);
  if (parsed.exit_code >= 0) {
    std::cout << parsed.out;
    std::cerr << parsed.err;
    return parsed.exit_code;
  }
  return run_command(parsed.command);
}

}  // namespace ptts::cli
