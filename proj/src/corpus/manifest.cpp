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

#include "corpus/manifest.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace ptts::corpus {

namespace {

using nlohmann::json;

std::string where(std::string_view origin, std::size_t line) {
  return std::string(origin) + ":" + std::to_string(line) + ": ";
}

ManifestEntry entry_from_json(const json& j) {
  if (!j.is_object()) throw CorpusError("record is not an object");
  ManifestEntry e;
  auto required_string = [&](const char* key) -> std::string {
    if (!j.contains(key) || !j[key].is_string()) {
      throw CorpusError(std::string("missing or non-string field '") + key + "'");
    }
    return j[key].get<std::string>();
  };
  e.id = required_string("id");
  e.audio_path = required_string("audio");
  e.text = required_string("text");
  e.speaker_id = required_string("speaker");
  e.scene = parse_scene(required_string("scene"));
  if (!j.contains("duration") || !j["duration"].is_number()) {
    throw CorpusError("missing or non-numeric field 'duration'");
  }
  e.duration_s = j["duration"].get<double>();
  if (j.contains("split")) {
    if (!j["split"].is_string()) throw CorpusError("field 'split' must be a string");
    e.split = parse_split(j["split"].get<std::string>());
  }
  if (j.contains("phonemes")) {
    if (!j["phonemes"].is_array()) throw CorpusError("field 'phonemes' must be an array");
    for (const json& p : j["phonemes"]) {
      if (!p.is_string()) throw CorpusError("phoneme symbols must be strings");
      e.phonemes.push_back(p.get<std::string>());
    }
  }
  if (j.contains("alignment")) {
    if (!j["alignment"].is_string()) throw CorpusError("field 'alignment' must be a string");
    e.alignment_path = j["alignment"].get<std::string>();
  }
  if (j.contains("transcript")) {
    if (!j["transcript"].is_string()) throw CorpusError("field 'transcript' must be a string");
    e.transcript = j["transcript"].get<std::string>();
  }
  return e;
}

void check_entry(const ManifestEntry& e) {
  if (e.id.empty()) throw CorpusError("entry has an empty id");
  if (!(e.duration_s > 0.0)) throw CorpusError("entry '" + e.id + "' has non-positive duration");
}

}  // namespace

std::string_view scene_name(Scene scene) {
  switch (scene) {
    case Scene::Chat:
      return "Chat";
    case Scene::News:
      return "News";
    case Scene::QA:
      return "QA";
    case Scene::Storytelling:
      return "Storytelling";
    case Scene::Other:
      return "Other";
  }
  return "Other";
}

Scene parse_scene(std::string_view name) {
  for (Scene s : kAllScenes) {
    if (scene_name(s) == name) return s;
  }
  throw CorpusError("unknown scene '" + std::string(name) +
                    "' (expected Chat, News, QA, Storytelling or Other)");
}

std::string_view split_name(Split split) {
  switch (split) {
    case Split::Train:
      return "train";
    case Split::Test:
      return "test";
    case Split::Unassigned:
      return "unassigned";
  }
  return "unassigned";
}

Split parse_split(std::string_view name) {
  if (name == "train") return Split::Train;
  if (name == "test") return Split::Test;
  if (name == "unassigned") return Split::Unassigned;
  throw CorpusError("unknown split '" + std::string(name) + "'");
}

void validate_manifest(const Manifest& manifest) {
  std::set<std::string> ids;
  for (const ManifestEntry& e : manifest) {
    check_entry(e);
    if (!ids.insert(e.id).second) throw CorpusError("duplicate entry id '" + e.id + "'");
  }
}

std::string format_entry(const ManifestEntry& e) {
  json j;
  j["id"] = e.id;
  j["audio"] = e.audio_path;
  j["text"] = e.text;
  if (!e.phonemes.empty()) j["phonemes"] = e.phonemes;
  j["speaker"] = e.speaker_id;
  j["scene"] = std::string(scene_name(e.scene));
  j["duration"] = e.duration_s;
  j["split"] = std::string(split_name(e.split));
  if (e.alignment_path) j["alignment"] = *e.alignment_path;
  if (e.transcript) j["transcript"] = *e.transcript;
  return j.dump();
}

std::string format_manifest(const Manifest& manifest) {
  std::string out;
  for (const ManifestEntry& e : manifest) {
    out += format_entry(e);
    out += '\n';
  }
  return out;
}

Manifest parse_manifest(std::string_view contents, std::string_view origin) {
  Manifest manifest;
  std::set<std::string> ids;
  std::istringstream in{std::string(contents)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      ManifestEntry e = entry_from_json(json::parse(line));
      check_entry(e);
      if (!ids.insert(e.id).second) throw CorpusError("duplicate entry id '" + e.id + "'");
      manifest.push_back(std::move(e));
    } catch (const json::exception& ex) {
      throw CorpusError(where(origin, line_no) + "malformed record: " + ex.what());
    } catch (const CorpusError& ex) {
      throw CorpusError(where(origin, line_no) + ex.what());
    }
  }
  return manifest;
}

Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusError("cannot open manifest: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str(), path.string());
}

void save_manifest(const std::filesystem::path& path, const Manifest& manifest) {
  validate_manifest(manifest);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CorpusError("cannot write manifest: " + path.string());
  out << format_manifest(manifest);
  if (!out) throw CorpusError("failed writing manifest: " + path.string());
}

std::filesystem::path resolve_path(const std::filesystem::path& manifest_path,
                                   const std::string& entry_path) {
  std::filesystem::path p(entry_path);
  if (p.is_absolute()) return p;
  return manifest_path.parent_path() / p;
}

}  // namespace ptts::corpus
