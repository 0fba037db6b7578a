// csmix/text_mixer.hpp

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
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "csmix/corpus.hpp"
#include "csmix/wordalign.hpp"

namespace csmix {

struct MixConfig {
  double ratio_min = 0.10;
  double ratio_max = 0.30;
  std::size_t min_sentence_len = 4;
  std::uint64_t seed = 0;
  std::size_t max_phrase_len = kDefaultMaxPhraseLen;
  /// Source words (WordKey form) that are never replaced. Empty by default.
  std::set<std::string, std::less<>> keep_words;

  /// Throws ValidationError unless 0 < ratio_min <= ratio_max < 1 and
  /// max_phrase_len > 0.
  void Validate() const;
};

struct Replacement {
  Span src;
  Span tgt;
  std::vector<std::string> words;

  friend bool operator==(const Replacement&, const Replacement&) = default;
};

/// Which source spans of one utterance are replaced by which target phrases.
/// Replacements are ordered by source position, never overlap, and always
/// leave at least one unreplaced source token between two spans.
struct MixPlan {
  std::string utt_id;
  std::vector<Replacement> replacements;
  double replaced_fraction = 0.0;
  std::uint64_t seed = 0;

  friend bool operator==(const MixPlan&, const MixPlan&) = default;
};

struct MixSkip {
  std::string utt_id;
  std::string reason;

  friend bool operator==(const MixSkip&, const MixSkip&) = default;
};

using PlanResult = std::variant<MixPlan, MixSkip>;

/// Plans phrase replacements for one sentence.
///
/// Draws a target ratio uniformly from [ratio_min, ratio_max] using the
/// (seed, utt_id) stream, sets the budget to round(ratio * len) (at least 1),
/// then walks the candidate pairs in random order and keeps each one that
/// fits the remaining budget and neither overlaps nor touches a span already
/// taken. Degenerate sentences are skipped, never failed.
PlanResult PlanMix(const Utterance& src, const std::vector<std::string>& tgt_words,
                   const std::vector<PhrasePair>& pairs, const MixConfig& cfg);

/// Applies a plan. Replaced spans become target words tagged `tgt_lang`;
/// the result has no audio and duration 0 until it is rendered.
Utterance ApplyMix(const Utterance& src, const MixPlan& plan, LangTag tgt_lang);

/// Checks every plan invariant against the alignment and config. Returns a
/// description of the first violation, or nullopt.
std::optional<std::string> CheckPlan(const MixPlan& plan, std::size_t src_len,
                                     const SentenceAlignment& alignment,
                                     const MixConfig& cfg);

struct MixCorpusResult {
  Manifest mixed;
  std::vector<MixPlan> plans;
  std::vector<MixSkip> skips;
};

/// Mixes a whole corpus. `tgt_sentences` and `alignments` are parallel to
/// `src.utterances`; alignment lengths must match the token counts.
/// Output order follows input order for any worker count.
MixCorpusResult MixCorpus(const Manifest& src,
                          const std::vector<std::vector<std::string>>& tgt_sentences,
                          const std::vector<SentenceAlignment>& alignments,
                          LangTag tgt_lang, const MixConfig& cfg, int workers = 1);

/// Reads whitespace-tokenized parallel text, one sentence per line.
std::vector<std::vector<std::string>> ReadParallelText(const std::filesystem::path& path);

std::string FormatPlanLine(const MixPlan& plan);
MixPlan ParsePlanLine(std::string_view line, std::size_t line_no);
void WritePlans(const std::vector<MixPlan>& plans, const std::filesystem::path& path);
std::vector<MixPlan> ReadPlans(const std::filesystem::path& path);

std::string FormatSkipLine(const MixSkip& skip);
void WriteSkips(const std::vector<MixSkip>& skips, const std::filesystem::path& path);

/// One sentence-mixed output: whole source utterances played back to back.
struct ConcatPart {
  char source = 'a';  // 'a' or 'b'
  std::string utt_id;
  std::optional<std::string> audio_path;  // as written in the source manifest
  double duration_s = 0.0;

  friend bool operator==(const ConcatPart&, const ConcatPart&) = default;
};

struct ConcatPlan {
  std::string id;
  std::vector<ConcatPart> parts;
  double gap_s = 0.0;

  friend bool operator==(const ConcatPlan&, const ConcatPlan&) = default;
};

struct SentenceMixResult {
  Manifest mixed;
  std::vector<ConcatPlan> plans;
};

/// Builds inter-sentential switching material. Each output alternates whole
/// utterances from `a` and `b` (even outputs start with a, odd with b),
/// drawing each side without replacement and reshuffling a side once it is
/// exhausted. ceil((|a| + |b|) / per_output) outputs are produced.
SentenceMixResult SentenceMix(const Manifest& a, const Manifest& b, std::size_t per_output,
                              double gap_s, std::uint64_t seed);

std::string FormatConcatPlanLine(const ConcatPlan& plan);
void WriteConcatPlans(const std::vector<ConcatPlan>& plans, const std::filesystem::path& path);

}  // namespace csmix
