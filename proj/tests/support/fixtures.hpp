// tests/support/fixtures.hpp

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
#include <string>
#include <vector>

#include "csmix/audio.hpp"
#include "csmix/corpus.hpp"
#include "csmix/wordalign.hpp"

namespace csmix::testing {

/// Creates a fresh directory under the system temp dir; removed on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& prefix = "csmix-test");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Hann-windowed tone whose pitch and length depend on the word.
AudioBuffer SynthesizeWord(const std::string& word, float amplitude, int sample_rate);

/// Silence-padded sequence of synthesized words and the matching CTM rows.
struct SpokenUtterance {
  AudioBuffer audio;
  std::vector<WordTiming> timings;
};
SpokenUtterance Speak(const std::string& utt_id, const std::vector<std::string>& words,
                      float level, int sample_rate);

/// A synthetic BM -> EN parallel corpus with word alignments and, optionally,
/// audio for the BM side plus an EN donor corpus covering every EN word.
///
/// Layout under root:
///   src/manifest.jsonl  src/words.ctm  src/audio/*.wav
///   tgt.txt  align.txt
///   donor/manifest.jsonl  donor/words.ctm  donor/audio/*.wav
///   en/manifest.jsonl   (target sentences as an EN-only manifest)
struct FixtureCorpus {
  std::filesystem::path root;
  Manifest src;
  std::vector<std::vector<std::string>> tgt;
  std::vector<SentenceAlignment> alignments;
  Manifest en;  // target side, tagged EN
};

struct FixtureOptions {
  std::size_t sentences = 100;
  std::size_t min_words = 3;
  std::size_t max_words = 14;
  std::uint64_t seed = 1;
  bool with_audio = false;
  int sample_rate = 16000;
};

FixtureCorpus MakeFixtureCorpus(const std::filesystem::path& root, const FixtureOptions& opts);

std::string ReadFileBytes(const std::filesystem::path& path);

}  // namespace csmix::testing
