// csmix/corpus.hpp

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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace csmix {

/// Language of a token. kNeutral marks punctuation, digits and symbols and
/// is excluded from every code-switching statistic.
enum class LangTag : std::uint8_t { kEn, kZh, kBm, kTa, kNeutral };

std::string_view ToString(LangTag lang);
/// Parses "EN", "ZH", "BM", "TA" or "NEUTRAL" (case-insensitive).
std::optional<LangTag> ParseLangTag(std::string_view code);
/// Like ParseLangTag but throws ValidationError on unknown codes.
LangTag LangTagFromString(std::string_view code);

struct Token {
  std::string surface;
  LangTag lang = LangTag::kNeutral;

  friend bool operator==(const Token&, const Token&) = default;
};

struct Utterance {
  std::string id;
  std::vector<Token> tokens;
  std::optional<std::string> audio_path;
  int sample_rate = 16000;
  double duration_s = 0.0;
  std::string text;
  /// Record fields this library does not interpret, as (name, compact JSON)
  /// in name order. Preserved verbatim on round-trip.
  std::vector<std::pair<std::string, std::string>> extra;

  friend bool operator==(const Utterance&, const Utterance&) = default;
};

/// Space-joined token surfaces.
std::string JoinSurfaces(const std::vector<Token>& tokens);

struct Manifest {
  std::vector<Utterance> utterances;
  std::set<LangTag> language_inventory;

  double Hours() const;
  /// Index of the utterance with this id, if any.
  std::optional<std::size_t> Find(std::string_view id) const;

  friend bool operator==(const Manifest&, const Manifest&) = default;
};

/// Checks every record invariant and recomputes the language inventory.
/// Throws ValidationError naming the offending utterance.
void ValidateManifest(Manifest& m);

/// Parses one manifest record. `line_no` is used only for messages.
Utterance ParseManifestLine(std::string_view line, std::size_t line_no);
std::string FormatManifestLine(const Utterance& u);

/// Reads a line-delimited manifest, applying NFC to all text. Errors cite
/// the 1-based line number of the first violation.
Manifest ReadManifest(const std::filesystem::path& path);
Manifest ReadManifest(std::istream& in);

void WriteManifest(const Manifest& m, const std::filesystem::path& path);
void WriteManifest(const Manifest& m, std::ostream& out);

/// Resolves a manifest audio reference relative to the manifest's directory.
std::filesystem::path ResolveAudioPath(const std::filesystem::path& manifest_path,
                                       const std::string& audio);

/// Word -> language map used to disambiguate Latin-script tokens.
using Lexicon = std::map<std::string, LangTag, std::less<>>;

/// Reads "word<ws>LANG" lines; '#' starts a comment.
Lexicon ReadLexicon(const std::filesystem::path& path);

/// Assigns a language to every token of a raw transcript.
///
/// Han script maps to ZH, Tamil script to TA, digits/punctuation/symbols to
/// NEUTRAL. Other letters are looked up in `lexicon` (keyed by lowercased
/// NFC word) and otherwise default to EN when the pair contains EN, else to
/// BM. Words mixing scripts are split at the script boundary first.
std::vector<Token> TagTokens(std::string_view text,
                             std::pair<LangTag, LangTag> pair,
                             const Lexicon* lexicon = nullptr);

}  // namespace csmix
