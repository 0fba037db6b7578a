// csmix/scorer.hpp

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

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "csmix/corpus.hpp"

namespace csmix {

enum class Metric { kWer, kCer, kMer };

std::string_view ToString(Metric metric);
Metric MetricFromString(std::string_view name);

/// Text normalization applied to reference and hypothesis before scoring.
struct NormPolicy {
  bool lowercase_latin = true;  // lowercases every cased script
  bool strip_punct = true;      // Unicode punctuation; apostrophes are deleted, the rest become spaces
  bool strip_digits = true;
  bool collapse_whitespace = true;
  // NFC is always applied.
};

/// One-line description for report headers.
std::string Describe(const NormPolicy& policy);

std::string NormalizeText(std::string_view text, const NormPolicy& policy);

/// Scoring units: words for WER, non-space code points for CER, and for MER
/// each Han character on its own plus whitespace-delimited runs of
/// everything else.
std::vector<std::string> MixedTokenize(std::string_view text, Metric metric);

enum class EditOp : char { kMatch = 'C', kSub = 'S', kDel = 'D', kIns = 'I' };

struct AlignedPair {
  EditOp op;
  std::ptrdiff_t ref = -1;  // index into ref units, -1 for insertions
  std::ptrdiff_t hyp = -1;  // index into hyp units, -1 for deletions

  friend bool operator==(const AlignedPair&, const AlignedPair&) = default;
};

struct EditCounts {
  std::size_t correct = 0;
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;

  std::size_t errors() const { return substitutions + deletions + insertions; }
  EditCounts& operator+=(const EditCounts& o);
  friend bool operator==(const EditCounts&, const EditCounts&) = default;
};

struct EditAlignment {
  EditCounts counts;
  std::vector<AlignedPair> trace;
};

/// Minimum unit-cost Levenshtein alignment. Among equal-cost alignments the
/// trace is fixed by backtracking from the end preferring match, then
/// substitution, then deletion, then insertion.
EditAlignment EditAlign(const std::vector<std::string>& ref, const std::vector<std::string>& hyp);

struct ScoreReport {
  Metric metric = Metric::kWer;
  std::size_t n_ref = 0;
  EditCounts counts;
  double rate = 0.0;       // 100 * (S + D + I) / max(1, n_ref)
  double corr_rate = 0.0;  // 100 * C / n_ref
  double sub_rate = 0.0;
  double del_rate = 0.0;
  double ins_rate = 0.0;
  bool empty_ref = false;  // n_ref == 0, rate is 100 * I

  /// Recomputes every rate from n_ref and counts.
  void Finalize();
};

ScoreReport ScorePair(std::string_view ref, std::string_view hyp, Metric metric,
                      const NormPolicy& policy, EditAlignment* alignment = nullptr);

struct UtteranceScore {
  std::string utt_id;
  ScoreReport report;
  bool missing_hyp = false;
  std::vector<std::string> ref_units;
  std::vector<std::string> hyp_units;
  std::vector<AlignedPair> trace;  // filled only when requested
};

struct CorpusScore {
  ScoreReport total;  // rates from pooled counts
  std::vector<UtteranceScore> utterances;
  std::vector<std::string> missing_hyps;
  std::vector<std::string> empty_refs;
};

using Hypotheses = std::vector<std::pair<std::string, std::string>>;

/// Reads "utt_id<TAB>text" lines. A line with no tab is an empty hypothesis.
Hypotheses ReadHypotheses(const std::filesystem::path& path);

/// Scores every reference utterance; missing hypotheses count as empty.
/// Throws ValidationError for a hypothesis id that is not in the manifest.
CorpusScore ScoreCorpus(const Manifest& ref, const Hypotheses& hyps, Metric metric,
                        const NormPolicy& policy, bool keep_trace = false, int workers = 1);

std::string FormatScoreTable(const CorpusScore& score, const NormPolicy& policy);
std::string FormatUtteranceScoreLine(const UtteranceScore& s, bool with_trace);

}  // namespace csmix
