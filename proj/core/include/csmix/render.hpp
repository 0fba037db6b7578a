// csmix/render.hpp

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
#include <functional>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "csmix/audio.hpp"
#include "csmix/corpus.hpp"
#include "csmix/text_mixer.hpp"
#include "csmix/wordalign.hpp"

namespace csmix {

using AudioHandle = std::shared_ptr<const AudioBuffer>;
using AudioLoader = std::function<AudioHandle(const std::string& path)>;

/// Thread-safe LRU cache of decoded WAV files.
class AudioCache {
 public:
  explicit AudioCache(std::size_t capacity = 256) : capacity_(capacity) {}

  AudioHandle Get(const std::string& path);
  AudioLoader Loader() {
    return [this](const std::string& path) { return Get(path); };
  }

 private:
  std::size_t capacity_;
  std::mutex mutex_;
  std::list<std::string> recency_;
  struct Entry {
    AudioHandle audio;
    std::list<std::string>::iterator position;
  };
  std::unordered_map<std::string, Entry> entries_;
};

struct DonorSpanRecord {
  Span span;  // source span the donor audio replaces
  std::string donor_path;
  double donor_start_s = 0.0;
  double donor_dur_s = 0.0;
  std::string words;  // inventory key that was matched

  friend bool operator==(const DonorSpanRecord&, const DonorSpanRecord&) = default;
};

struct RenderReport {
  std::string utt_id;
  std::vector<DonorSpanRecord> spans;
  std::size_t num_samples = 0;
  double duration_s = 0.0;
  std::optional<std::string> skipped;

  friend bool operator==(const RenderReport&, const RenderReport&) = default;
};

struct RenderResult {
  std::optional<AudioBuffer> audio;  // empty when skipped
  RenderReport report;
};

/// Renders the audio of one phrase-mixed utterance.
///
/// Runs of unreplaced source words are cut from the source recording. Each
/// replaced span is voiced from the inventory by greedily taking the longest
/// run of its words that was spoken contiguously somewhere, falling back to
/// shorter runs and finally single words. Each donor occurrence is drawn
/// uniformly from its list with the (seed, utt_id, replacement, position)
/// stream. Missing words or timings skip the utterance with a reason.
RenderResult RenderMixedUtterance(const Utterance& src, const AudioBuffer& src_audio,
                                  const std::vector<WordTiming>& src_timings,
                                  const MixPlan& plan, const SegmentInventory& inventory,
                                  const AudioLoader& load_donor, const SpliceConfig& cfg,
                                  std::uint64_t seed);

/// Plays whole utterances back to back with gap_s of silence between them.
AudioBuffer RenderConcat(const std::vector<AudioBuffer>& parts, double gap_s);

std::string FormatRenderReportLine(const RenderReport& report);
void WriteRenderReports(const std::vector<RenderReport>& reports,
                        const std::filesystem::path& path);

}  // namespace csmix
