// csmix/wordalign.hpp

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
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "csmix/corpus.hpp"

namespace csmix {

struct AlignmentLink {
  std::size_t src = 0;
  std::size_t tgt = 0;

  friend auto operator<=>(const AlignmentLink&, const AlignmentLink&) = default;
};

/// Word alignment of one sentence pair. Links are kept sorted and unique.
struct SentenceAlignment {
  std::size_t src_len = 0;
  std::size_t tgt_len = 0;
  std::vector<AlignmentLink> links;

  /// Sorts and deduplicates links; throws if any index is out of range.
  void Canonicalize();

  friend bool operator==(const SentenceAlignment&, const SentenceAlignment&) = default;
};

/// Inclusive token interval [first, last].
struct Span {
  std::size_t first = 0;
  std::size_t last = 0;

  std::size_t size() const { return last - first + 1; }
  bool Contains(std::size_t i) const { return i >= first && i <= last; }

  friend auto operator<=>(const Span&, const Span&) = default;
};

struct PhrasePair {
  Span src;
  Span tgt;

  friend auto operator<=>(const PhrasePair&, const PhrasePair&) = default;
};

inline constexpr std::size_t kDefaultMaxPhraseLen = 7;

/// Parses "i-j i-j ..." alignment lines (0-based, one line per sentence pair)
/// and validates each index against the given sentence lengths. The file
/// must have exactly src_lens.size() lines.
std::vector<SentenceAlignment> ParseAlignments(std::istream& in,
                                               const std::vector<std::size_t>& src_lens,
                                               const std::vector<std::size_t>& tgt_lens);
std::vector<SentenceAlignment> ParseAlignmentFile(const std::filesystem::path& path,
                                                  const std::vector<std::size_t>& src_lens,
                                                  const std::vector<std::size_t>& tgt_lens);

/// Every phrase pair consistent with the alignment whose spans are both at
/// most max_phrase_len long. A pair is consistent when no link leaves the
/// rectangle through either span and at least one link lies inside it.
/// Unaligned words may sit anywhere in a span. Returned sorted by
/// (src, tgt).
std::vector<PhrasePair> ExtractPhrasePairs(const SentenceAlignment& alignment,
                                           std::size_t max_phrase_len = kDefaultMaxPhraseLen);

/// Checks consistency of a single pair against the alignment.
bool IsConsistent(const SentenceAlignment& alignment, const PhrasePair& pair);

struct WordTiming {
  std::string utt_id;
  std::string word;
  double start_s = 0.0;
  double dur_s = 0.0;

  double end_s() const { return start_s + dur_s; }
  friend bool operator==(const WordTiming&, const WordTiming&) = default;
};

/// Per-utterance word timings, each list sorted by start time.
using TimingTable = std::map<std::string, std::vector<WordTiming>, std::less<>>;

/// Parses CTM rows "utt_id channel start dur word". Rejects non-positive
/// durations and overlapping words within an utterance, naming the row.
TimingTable ParseCtm(std::istream& in);
TimingTable ParseCtmFile(const std::filesystem::path& path);

/// One place a word (or run of CTM-adjacent words) is spoken.
struct Occurrence {
  std::string audio_path;
  std::string utt_id;
  int sample_rate = 16000;
  double start_s = 0.0;
  double dur_s = 0.0;

  friend bool operator==(const Occurrence&, const Occurrence&) = default;
};

/// Donor audio indexed by normalized word sequence (words joined by a single
/// space, see unicode::WordKey). Every n-gram of CTM-adjacent words up to
/// max_ngram is an entry; occurrence lists are ordered by (path, start).
class SegmentInventory {
 public:
  const std::vector<Occurrence>* Find(std::string_view key) const;
  const std::vector<Occurrence>* Find(const std::vector<std::string>& words) const;

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::map<std::string, std::vector<Occurrence>, std::less<>>& entries() const {
    return entries_;
  }

  void Add(std::string key, Occurrence occurrence);
  /// Sorts every occurrence list into its canonical order.
  void Finalize();
  /// Folds another inventory in. Call Finalize() afterwards.
  void Merge(SegmentInventory&& other);

 private:
  std::map<std::string, std::vector<Occurrence>, std::less<>> entries_;
};

std::string InventoryKey(const std::vector<std::string>& words);

/// One donor corpus: a manifest plus its word timings. Audio paths are
/// resolved against manifest_path's directory.
struct DonorCorpus {
  std::filesystem::path manifest_path;
  Manifest manifest;
  TimingTable timings;
};

/// Builds the inventory from all donor corpora. Every timed utt_id must
/// resolve to an utterance with audio, and every timing must fall inside the
/// utterance duration (one sample of slack).
SegmentInventory BuildSegmentInventory(const std::vector<DonorCorpus>& donors,
                                       std::size_t max_ngram = kDefaultMaxPhraseLen,
                                       int workers = 1);

}  // namespace csmix
