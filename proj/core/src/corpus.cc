// core/src/corpus.cc

// Copyright 2026 The csmix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "csmix/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "csmix/error.hpp"
#include "csmix/unicode.hpp"
#include "json.hpp"

namespace csmix {

using nlohmann::ordered_json;

std::string_view ToString(LangTag lang) {
  switch (lang) {
    case LangTag::kEn: return "EN";
    case LangTag::kZh: return "ZH";
    case LangTag::kBm: return "BM";
    case LangTag::kTa: return "TA";
    case LangTag::kNeutral: return "NEUTRAL";
  }
  return "NEUTRAL";
}

std::optional<LangTag> ParseLangTag(std::string_view code) {
  std::string upper(code);
  for (char& c : upper) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  }
  if (upper == "EN") return LangTag::kEn;
  if (upper == "ZH") return LangTag::kZh;
  if (upper == "BM") return LangTag::kBm;
  if (upper == "TA") return LangTag::kTa;
  if (upper == "NEUTRAL") return LangTag::kNeutral;
  return std::nullopt;
}

LangTag LangTagFromString(std::string_view code) {
  if (auto lang = ParseLangTag(code)) return *lang;
  throw ValidationError("unknown language code '" + std::string(code) + "'");
}

std::string JoinSurfaces(const std::vector<Token>& tokens) {
  std::string out;
  for (const Token& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t.surface;
  }
  return out;
}

double Manifest::Hours() const {
  double seconds = 0.0;
  for (const Utterance& u : utterances) seconds += u.duration_s;
  return seconds / 3600.0;
}

std::optional<std::size_t> Manifest::Find(std::string_view id) const {
  for (std::size_t i = 0; i < utterances.size(); ++i) {
    if (utterances[i].id == id) return i;
  }
  return std::nullopt;
}

namespace {

std::string StripSpaces(std::string_view text) {
  std::string out;
  for (char32_t cp : unicode::Decode(text)) {
    if (!unicode::IsSpace(cp)) unicode::AppendUtf8(cp, out);
  }
  return out;
}

void ValidateUtterance(const Utterance& u) {
  if (u.id.empty()) throw ValidationError("empty utterance id");
  if (const auto pieces = unicode::SplitWhitespace(u.id);
      pieces.size() != 1 || pieces[0] != u.id) {
    throw ValidationError("utterance id '" + u.id + "' contains white space");
  }
  if (u.sample_rate <= 0) {
    throw ValidationError("utterance '" + u.id + "': sample_rate must be > 0");
  }
  if (!std::isfinite(u.duration_s) || u.duration_s < 0.0) {
    throw ValidationError("utterance '" + u.id + "': duration_s must be >= 0");
  }
  for (std::size_t i = 0; i < u.tokens.size(); ++i) {
    const std::string& w = u.tokens[i].surface;
    const auto pieces = unicode::SplitWhitespace(w);
    if (pieces.size() != 1 || pieces[0] != w) {
      throw ValidationError("utterance '" + u.id + "': token " +
                            std::to_string(i) +
                            " is empty or contains white space");
    }
  }
  if (!u.tokens.empty() && StripSpaces(u.text) != StripSpaces(JoinSurfaces(u.tokens))) {
    throw ValidationError("utterance '" + u.id +
                          "': tokens do not spell the transcript in order");
  }
}

}  // namespace

void ValidateManifest(Manifest& m) {
  std::unordered_map<std::string_view, std::size_t> seen;
  m.language_inventory.clear();
  for (std::size_t i = 0; i < m.utterances.size(); ++i) {
    const Utterance& u = m.utterances[i];
    ValidateUtterance(u);
    auto [it, inserted] = seen.emplace(u.id, i);
    if (!inserted) {
      throw ValidationError("duplicate utterance id '" + u.id + "'");
    }
    for (const Token& t : u.tokens) {
      if (t.lang != LangTag::kNeutral) m.language_inventory.insert(t.lang);
    }
  }
}

Utterance ParseManifestLine(std::string_view line, std::size_t line_no) {
  const std::string where = "line " + std::to_string(line_no) + ": ";
  // Ordered so unknown fields are written back in their original order.
  ordered_json record;
  try {
    record = ordered_json::parse(line);
  } catch (const ordered_json::parse_error& e) {
    throw ValidationError(where + "malformed JSON (" + e.what() + ")");
  }
  if (!record.is_object()) throw ValidationError(where + "record is not an object");

  Utterance u;
  auto field = [&](const char* name) -> const ordered_json* {
    auto it = record.find(name);
    return it == record.end() ? nullptr : &*it;
  };
  auto bad = [&](const std::string& what) {
    return ValidationError(where + what);
  };

  const ordered_json* id = field("id");
  if (id == nullptr || !id->is_string()) throw bad("field 'id' missing or not a string");
  u.id = unicode::Nfc(id->get<std::string>());

  if (const ordered_json* audio = field("audio"); audio != nullptr && !audio->is_null()) {
    if (!audio->is_string()) throw bad("field 'audio' is not a string");
    u.audio_path = audio->get<std::string>();
  }
  const ordered_json* rate = field("sample_rate");
  if (rate == nullptr || !rate->is_number_integer()) {
    throw bad("field 'sample_rate' missing or not an integer");
  }
  u.sample_rate = rate->get<int>();
  const ordered_json* duration = field("duration_s");
  if (duration == nullptr || !duration->is_number()) {
    throw bad("field 'duration_s' missing or not a number");
  }
  u.duration_s = duration->get<double>();
  const ordered_json* text = field("text");
  if (text == nullptr || !text->is_string()) throw bad("field 'text' missing or not a string");
  try {
    u.text = unicode::Nfc(text->get<std::string>());
  } catch (const Error& e) {
    throw bad(std::string("field 'text': ") + e.what());
  }

  if (const ordered_json* tokens = field("tokens"); tokens != nullptr) {
    if (!tokens->is_array()) throw bad("field 'tokens' is not an array");
    for (const ordered_json& t : *tokens) {
      if (!t.is_object() || !t.contains("w") || !t.contains("lang") ||
          !t["w"].is_string() || !t["lang"].is_string()) {
        throw bad("token entries must be {\"w\": string, \"lang\": string}");
      }
      auto lang = ParseLangTag(t["lang"].get<std::string>());
      if (!lang) {
        throw bad("unknown lang code '" + t["lang"].get<std::string>() + "'");
      }
      u.tokens.push_back({unicode::Nfc(t["w"].get<std::string>()), *lang});
    }
  }

  for (auto it = record.begin(); it != record.end(); ++it) {
    const std::string& key = it.key();
    if (key == "id" || key == "audio" || key == "sample_rate" ||
        key == "duration_s" || key == "text" || key == "tokens") {
      continue;
    }
    u.extra.emplace_back(key, it.value().dump());
  }
  try {
    ValidateUtterance(u);
  } catch (const Error& e) {
    throw bad(e.what());
  }
  return u;
}

std::string FormatManifestLine(const Utterance& u) {
  ordered_json record;
  record["id"] = u.id;
  if (u.audio_path) record["audio"] = *u.audio_path;
  record["sample_rate"] = u.sample_rate;
  record["duration_s"] = u.duration_s;
  record["text"] = u.text;
  ordered_json tokens = ordered_json::array();
  for (const Token& t : u.tokens) {
    ordered_json entry;
    entry["w"] = t.surface;
    entry["lang"] = std::string(ToString(t.lang));
    tokens.push_back(std::move(entry));
  }
  record["tokens"] = std::move(tokens);
  for (const auto& [key, value] : u.extra) {
    record[key] = ordered_json::parse(value);
  }
  return record.dump();
}

Manifest ReadManifest(std::istream& in) {
  Manifest m;
  std::unordered_map<std::string, std::size_t> first_line;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    Utterance u = ParseManifestLine(line, line_no);
    auto [it, inserted] = first_line.emplace(u.id, line_no);
    if (!inserted) {
      throw ValidationError("line " + std::to_string(line_no) +
                            ": duplicate utterance id '" + u.id +
                            "' (first seen on line " +
                            std::to_string(it->second) + ")");
    }
    for (const Token& t : u.tokens) {
      if (t.lang != LangTag::kNeutral) m.language_inventory.insert(t.lang);
    }
    m.utterances.push_back(std::move(u));
  }
  if (in.bad()) throw IoError("read error while reading manifest");
  return m;
}

Manifest ReadManifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open manifest " + path.string());
  try {
    return ReadManifest(in);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

void WriteManifest(const Manifest& m, std::ostream& out) {
  for (const Utterance& u : m.utterances) out << FormatManifestLine(u) << '\n';
}

void WriteManifest(const Manifest& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write manifest " + path.string());
  WriteManifest(m, out);
  out.flush();
  if (!out) throw IoError("write error on " + path.string());
}

std::filesystem::path ResolveAudioPath(const std::filesystem::path& manifest_path,
                                       const std::string& audio) {
  std::filesystem::path p(audio);
  if (p.is_absolute()) return p;
  return manifest_path.parent_path() / p;
}

Lexicon ReadLexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open lexicon " + path.string());
  Lexicon lexicon;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    auto fields = unicode::SplitWhitespace(line);
    if (fields.empty()) continue;
    if (fields.size() != 2) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                            ": expected 'word LANG'");
    }
    auto lang = ParseLangTag(fields[1]);
    if (!lang) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                            ": unknown lang code '" + fields[1] + "'");
    }
    lexicon[unicode::WordKey(fields[0])] = *lang;
  }
  return lexicon;
}

std::vector<Token> TagTokens(std::string_view text,
                             std::pair<LangTag, LangTag> pair,
                             const Lexicon* lexicon) {
  const bool has_en = pair.first == LangTag::kEn || pair.second == LangTag::kEn;
  const LangTag latin_default = has_en ? LangTag::kEn : LangTag::kBm;

  std::vector<Token> tokens;
  for (const std::string& word : unicode::SplitWhitespace(unicode::Nfc(text))) {
    for (unicode::ScriptRun& run : unicode::SplitScriptRuns(word)) {
      LangTag lang = LangTag::kNeutral;
      switch (run.script) {
        case unicode::ScriptClass::kHan: lang = LangTag::kZh; break;
        case unicode::ScriptClass::kTamil: lang = LangTag::kTa; break;
        case unicode::ScriptClass::kLetter: {
          lang = latin_default;
          if (lexicon != nullptr) {
            if (auto it = lexicon->find(unicode::WordKey(run.text));
                it != lexicon->end()) {
              lang = it->second;
            }
          }
          break;
        }
        default: lang = LangTag::kNeutral; break;
      }
      tokens.push_back({std::move(run.text), lang});
    }
  }
  return tokens;
}

}  // namespace csmix
