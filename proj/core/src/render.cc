// core/src/render.cc

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

#include "csmix/render.hpp"

#include <algorithm>
#include <fstream>

#include "csmix/error.hpp"
#include "csmix/rng.hpp"
#include "csmix/unicode.hpp"
#include "json.hpp"

namespace csmix {

AudioHandle AudioCache::Get(const std::string& path) {
  {
    std::lock_guard lock(mutex_);
    if (auto it = entries_.find(path); it != entries_.end()) {
      recency_.splice(recency_.begin(), recency_, it->second.position);
      return it->second.audio;
    }
  }
  // Decode outside the lock; a concurrent miss on the same path just loads
  // it twice.
  auto audio = std::make_shared<const AudioBuffer>(ReadWav(path));
  std::lock_guard lock(mutex_);
  if (auto it = entries_.find(path); it != entries_.end()) return it->second.audio;
  recency_.push_front(path);
  entries_[path] = {audio, recency_.begin()};
  while (entries_.size() > capacity_ && !recency_.empty()) {
    entries_.erase(recency_.back());
    recency_.pop_back();
  }
  return audio;
}

namespace {

// Words made only of punctuation or symbols are not spoken.
bool IsSpoken(std::string_view word) {
  for (char32_t cp : unicode::Decode(word)) {
    const auto c = unicode::Classify(cp);
    if (c != unicode::ScriptClass::kNeutral && c != unicode::ScriptClass::kSpace) return true;
    if (unicode::IsDigit(cp)) return true;
  }
  return false;
}

RenderResult Skip(RenderResult result, std::string reason) {
  result.audio.reset();
  result.report.spans.clear();
  result.report.skipped = std::move(reason);
  return result;
}

}  // namespace

RenderResult RenderMixedUtterance(const Utterance& src, const AudioBuffer& src_audio,
                                  const std::vector<WordTiming>& src_timings,
                                  const MixPlan& plan, const SegmentInventory& inventory,
                                  const AudioLoader& load_donor, const SpliceConfig& cfg,
                                  std::uint64_t seed) {
  RenderResult result;
  result.report.utt_id = src.id;
  const std::size_t n = src.tokens.size();

  std::vector<int> replacement_of(n, -1);
  for (std::size_t r = 0; r < plan.replacements.size(); ++r) {
    const Span& s = plan.replacements[r].src;
    if (s.first > s.last || s.last >= n) return Skip(std::move(result), "plan span out of range");
    for (std::size_t i = s.first; i <= s.last; ++i) replacement_of[i] = static_cast<int>(r);
  }

  // Walk the transcript and the CTM together.
  std::vector<const WordTiming*> timing(n, nullptr);
  std::size_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Token& tok = src.tokens[i];
    if (next < src_timings.size() &&
        unicode::WordKey(tok.surface) == unicode::WordKey(src_timings[next].word)) {
      timing[i] = &src_timings[next++];
    } else if (replacement_of[i] < 0 && IsSpoken(tok.surface)) {
      return Skip(std::move(result), "no timing for source word '" + tok.surface + "'");
    }
  }

  std::vector<Segment> segments;
  std::vector<std::pair<std::size_t, DonorSpanRecord>> donors;  // segment index, record

  const WordTiming* run_first = nullptr;
  const WordTiming* run_last = nullptr;
  auto flush_host = [&]() {
    if (run_first == nullptr) return;
    segments.push_back({Cut(src_audio, run_first->start_s, run_last->end_s() - run_first->start_s),
                        SegmentRole::kHost});
    run_first = run_last = nullptr;
  };

  try {
    for (std::size_t i = 0; i < n;) {
      if (replacement_of[i] < 0) {
        if (timing[i] != nullptr) {
          if (run_first == nullptr) run_first = timing[i];
          run_last = timing[i];
        }
        ++i;
        continue;
      }
      flush_host();
      const auto r = static_cast<std::size_t>(replacement_of[i]);
      const Replacement& rep = plan.replacements[r];

      std::vector<std::string> words;
      for (const std::string& w : rep.words) {
        if (IsSpoken(w)) words.push_back(w);
      }
      for (std::size_t p = 0; p < words.size();) {
        const std::vector<Occurrence>* found = nullptr;
        std::size_t len = words.size() - p;
        std::string key;
        for (; len > 0; --len) {
          key = InventoryKey({words.begin() + static_cast<std::ptrdiff_t>(p),
                              words.begin() + static_cast<std::ptrdiff_t>(p + len)});
          found = inventory.Find(key);
          if (found != nullptr && !found->empty()) break;
        }
        if (len == 0) {
          return Skip(std::move(result), "donor word '" + words[p] + "' not in inventory");
        }
        Rng rng = Rng(seed).With(src.id).With("donor").With(r).With(p);
        const Occurrence& occ = (*found)[rng.Index(found->size())];
        if (occ.sample_rate != src_audio.sample_rate) {
          return Skip(std::move(result), "donor '" + occ.audio_path + "' has sample rate " +
                                             std::to_string(occ.sample_rate) + ", host has " +
                                             std::to_string(src_audio.sample_rate));
        }
        AudioHandle donor = load_donor(occ.audio_path);
        if (donor->sample_rate != src_audio.sample_rate) {
          return Skip(std::move(result), "sample-rate mismatch in '" + occ.audio_path + "'");
        }
        donors.push_back({segments.size(),
                          {rep.src, occ.audio_path, occ.start_s, occ.dur_s, key}});
        segments.push_back({Cut(*donor, occ.start_s, occ.dur_s), SegmentRole::kDonor});
        p += len;
      }
      i = rep.src.last + 1;
    }
    flush_host();
    if (segments.empty()) return Skip(std::move(result), "nothing to render");

    result.audio = Splice(segments, cfg);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kIo) throw;
    return Skip(std::move(result), e.what());
  }

  for (auto& [index, record] : donors) result.report.spans.push_back(std::move(record));
  result.report.num_samples = result.audio->size();
  result.report.duration_s = result.audio->duration_s();
  return result;
}

AudioBuffer RenderConcat(const std::vector<AudioBuffer>& parts, double gap_s) {
  SpliceConfig cfg;
  cfg.norm_mode = NormMode::kOff;
  cfg.crossfade_ms = 0.0;
  cfg.inter_segment_silence_ms = gap_s * 1000.0;
  std::vector<Segment> segments;
  segments.reserve(parts.size());
  for (const AudioBuffer& p : parts) segments.push_back({p, SegmentRole::kHost});
  return Splice(segments, cfg);
}

std::string FormatRenderReportLine(const RenderReport& report) {
  nlohmann::ordered_json record;
  record["utt_id"] = report.utt_id;
  nlohmann::ordered_json spans = nlohmann::ordered_json::array();
  for (const DonorSpanRecord& s : report.spans) {
    nlohmann::ordered_json entry;
    entry["span"] = {s.span.first, s.span.last};
    entry["words"] = s.words;
    entry["donor_path"] = s.donor_path;
    entry["donor_start"] = s.donor_start_s;
    entry["donor_dur"] = s.donor_dur_s;
    spans.push_back(std::move(entry));
  }
  record["spans"] = std::move(spans);
  if (report.skipped) {
    record["skipped"] = *report.skipped;
  } else {
    record["num_samples"] = report.num_samples;
    record["duration_s"] = report.duration_s;
  }
  return record.dump();
}

void WriteRenderReports(const std::vector<RenderReport>& reports,
                        const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  for (const RenderReport& r : reports) out << FormatRenderReportLine(r) << '\n';
  out.flush();
  if (!out) throw IoError("write error on " + path.string());
}

}  // namespace csmix
