// core/src/wordalign.cc

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

#include "csmix/wordalign.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>
#include <tuple>

#include "csmix/error.hpp"
#include "csmix/parallel.hpp"
#include "csmix/unicode.hpp"

namespace csmix {

void SentenceAlignment::Canonicalize() {
  for (const AlignmentLink& l : links) {
    if (l.src >= src_len || l.tgt >= tgt_len) {
      throw ValidationError("alignment link " + std::to_string(l.src) + "-" +
                            std::to_string(l.tgt) + " out of range for lengths (" +
                            std::to_string(src_len) + "," + std::to_string(tgt_len) + ")");
    }
  }
  std::sort(links.begin(), links.end());
  links.erase(std::unique(links.begin(), links.end()), links.end());
}

namespace {

bool ParseIndex(std::string_view s, std::size_t& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

std::vector<SentenceAlignment> ParseAlignments(std::istream& in,
                                               const std::vector<std::size_t>& src_lens,
                                               const std::vector<std::size_t>& tgt_lens) {
  if (src_lens.size() != tgt_lens.size()) {
    throw ValidationError("alignment: " + std::to_string(src_lens.size()) +
                          " source lengths but " + std::to_string(tgt_lens.size()) +
                          " target lengths");
  }
  std::vector<SentenceAlignment> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no > src_lens.size()) {
      throw ValidationError("alignment line " + std::to_string(line_no) +
                            ": more alignment lines than sentence pairs (" +
                            std::to_string(src_lens.size()) + ")");
    }
    SentenceAlignment a;
    a.src_len = src_lens[line_no - 1];
    a.tgt_len = tgt_lens[line_no - 1];
    std::istringstream fields(line);
    std::string token;
    while (fields >> token) {
      const auto dash = token.find('-');
      AlignmentLink link;
      if (dash == std::string::npos ||
          !ParseIndex(std::string_view(token).substr(0, dash), link.src) ||
          !ParseIndex(std::string_view(token).substr(dash + 1), link.tgt)) {
        throw ValidationError("alignment line " + std::to_string(line_no) +
                              ": malformed token '" + token + "'");
      }
      if (link.src >= a.src_len || link.tgt >= a.tgt_len) {
        throw ValidationError("alignment line " + std::to_string(line_no) +
                              ": token '" + token + "' out of range for lengths (" +
                              std::to_string(a.src_len) + "," +
                              std::to_string(a.tgt_len) + ")");
      }
      a.links.push_back(link);
    }
    a.Canonicalize();
    out.push_back(std::move(a));
  }
  if (out.size() != src_lens.size()) {
    throw ValidationError("alignment: " + std::to_string(out.size()) +
                          " lines but " + std::to_string(src_lens.size()) +
                          " sentence pairs");
  }
  return out;
}

std::vector<SentenceAlignment> ParseAlignmentFile(const std::filesystem::path& path,
                                                  const std::vector<std::size_t>& src_lens,
                                                  const std::vector<std::size_t>& tgt_lens) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open alignment file " + path.string());
  try {
    return ParseAlignments(in, src_lens, tgt_lens);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

bool IsConsistent(const SentenceAlignment& a, const PhrasePair& p) {
  bool inside = false;
  for (const AlignmentLink& l : a.links) {
    const bool in_src = p.src.Contains(l.src);
    const bool in_tgt = p.tgt.Contains(l.tgt);
    if (in_src != in_tgt) return false;
    inside = inside || in_src;
  }
  return inside;
}

std::vector<PhrasePair> ExtractPhrasePairs(const SentenceAlignment& a,
                                           std::size_t max_phrase_len) {
  std::vector<PhrasePair> pairs;
  if (max_phrase_len == 0 || a.links.empty()) return pairs;

  // Only the extent of each word's links matters: a target word keeps a
  // source span consistent iff all its links fall inside it. An unaligned
  // word has lo > hi.
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  struct Extent {
    std::size_t lo = kNone;
    std::size_t hi = 0;
    bool aligned() const { return lo != kNone; }
  };
  std::vector<Extent> src_ext(a.src_len), tgt_ext(a.tgt_len);
  for (const AlignmentLink& l : a.links) {
    src_ext[l.src].lo = std::min(src_ext[l.src].lo, l.tgt);
    src_ext[l.src].hi = std::max(src_ext[l.src].hi, l.tgt);
    tgt_ext[l.tgt].lo = std::min(tgt_ext[l.tgt].lo, l.src);
    tgt_ext[l.tgt].hi = std::max(tgt_ext[l.tgt].hi, l.src);
  }

  for (std::size_t i1 = 0; i1 < a.src_len; ++i1) {
    std::size_t tmin = kNone, tmax = 0;
    for (std::size_t i2 = i1; i2 < a.src_len && i2 - i1 < max_phrase_len; ++i2) {
      if (src_ext[i2].aligned()) {
        tmin = std::min(tmin, src_ext[i2].lo);
        tmax = std::max(tmax, src_ext[i2].hi);
      }
      if (tmin == kNone) continue;
      if (tmax - tmin + 1 > max_phrase_len) break;

      bool consistent = true;
      for (std::size_t j = tmin; j <= tmax && consistent; ++j) {
        const Extent& e = tgt_ext[j];
        consistent = !e.aligned() || (e.lo >= i1 && e.hi <= i2);
      }
      if (!consistent) continue;

      // Grow the target span over unaligned boundary words. Emitting j1 and
      // then j2 in ascending order keeps the output sorted.
      std::size_t jlo = tmin;
      while (jlo > 0 && !tgt_ext[jlo - 1].aligned() && tmax - jlo + 2 <= max_phrase_len) --jlo;
      for (std::size_t j1 = jlo; j1 <= tmin; ++j1) {
        for (std::size_t j2 = tmax; j2 < a.tgt_len && j2 - j1 + 1 <= max_phrase_len; ++j2) {
          if (j2 > tmax && tgt_ext[j2].aligned()) break;
          pairs.push_back({{i1, i2}, {j1, j2}});
        }
      }
    }
  }
  return pairs;
}

namespace {

struct CtmRow {
  WordTiming timing;
  std::size_t line_no;
};

bool ParseSeconds(const std::string& s, double& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

}  // namespace

TimingTable ParseCtm(std::istream& in) {
  std::map<std::string, std::vector<CtmRow>, std::less<>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.rfind(";;", 0) == 0) continue;
    std::istringstream fields(line);
    std::vector<std::string> f;
    for (std::string s; fields >> s;) f.push_back(std::move(s));
    if (f.empty()) continue;
    const std::string where = "CTM line " + std::to_string(line_no) + ": ";
    if (f.size() < 5) throw ValidationError(where + "expected 'utt_id channel start dur word'");
    WordTiming t;
    t.utt_id = f[0];
    t.word = unicode::Nfc(f[4]);
    if (!ParseSeconds(f[2], t.start_s) || !ParseSeconds(f[3], t.dur_s)) {
      throw ValidationError(where + "start/duration are not numbers");
    }
    if (t.start_s < 0.0) throw ValidationError(where + "negative start for '" + t.utt_id + "'");
    if (t.dur_s <= 0.0) {
      throw ValidationError(where + "non-positive duration for '" + t.utt_id + "'");
    }
    rows[t.utt_id].push_back({std::move(t), line_no});
  }

  constexpr double kOverlapTolerance = 1e-6;
  TimingTable table;
  for (auto& [utt_id, list] : rows) {
    std::stable_sort(list.begin(), list.end(), [](const CtmRow& a, const CtmRow& b) {
      return a.timing.start_s < b.timing.start_s;
    });
    for (std::size_t k = 1; k < list.size(); ++k) {
      if (list[k].timing.start_s < list[k - 1].timing.end_s() - kOverlapTolerance) {
        throw ValidationError("CTM line " + std::to_string(list[k].line_no) +
                              ": word overlaps line " +
                              std::to_string(list[k - 1].line_no) +
                              " in utterance '" + utt_id + "'");
      }
    }
    auto& out = table[utt_id];
    out.reserve(list.size());
    for (CtmRow& r : list) out.push_back(std::move(r.timing));
  }
  return table;
}

TimingTable ParseCtmFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open CTM " + path.string());
  try {
    return ParseCtm(in);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

std::string InventoryKey(const std::vector<std::string>& words) {
  std::string key;
  for (const std::string& w : words) {
    if (!key.empty()) key += ' ';
    key += unicode::WordKey(w);
  }
  return key;
}

const std::vector<Occurrence>* SegmentInventory::Find(std::string_view key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

const std::vector<Occurrence>* SegmentInventory::Find(
    const std::vector<std::string>& words) const {
  return Find(InventoryKey(words));
}

void SegmentInventory::Add(std::string key, Occurrence occurrence) {
  entries_[std::move(key)].push_back(std::move(occurrence));
}

void SegmentInventory::Finalize() {
  for (auto& [key, list] : entries_) {
    std::sort(list.begin(), list.end(), [](const Occurrence& a, const Occurrence& b) {
      return std::tie(a.audio_path, a.start_s, a.dur_s, a.utt_id) <
             std::tie(b.audio_path, b.start_s, b.dur_s, b.utt_id);
    });
  }
}

void SegmentInventory::Merge(SegmentInventory&& other) {
  for (auto& [key, list] : other.entries_) {
    auto& mine = entries_[key];
    mine.insert(mine.end(), std::make_move_iterator(list.begin()),
                std::make_move_iterator(list.end()));
  }
  other.entries_.clear();
}

SegmentInventory BuildSegmentInventory(const std::vector<DonorCorpus>& donors,
                                       std::size_t max_ngram, int workers) {
  struct Job {
    const DonorCorpus* donor;
    const std::string* utt_id;
    const std::vector<WordTiming>* timings;
  };
  std::vector<Job> jobs;
  for (const DonorCorpus& d : donors) {
    for (const auto& [utt_id, timings] : d.timings) jobs.push_back({&d, &utt_id, &timings});
  }

  std::vector<SegmentInventory> partial(jobs.size());
  ParallelFor(jobs.size(), workers, [&](std::size_t k) {
    const Job& job = jobs[k];
    const auto index = job.donor->manifest.Find(*job.utt_id);
    if (!index) {
      throw ValidationError("CTM utterance '" + *job.utt_id + "' not found in " +
                            job.donor->manifest_path.string());
    }
    const Utterance& u = job.donor->manifest.utterances[*index];
    if (!u.audio_path) {
      throw ValidationError("utterance '" + u.id + "' in " +
                            job.donor->manifest_path.string() + " has no audio");
    }
    const std::string path =
        ResolveAudioPath(job.donor->manifest_path, *u.audio_path).lexically_normal().string();
    const double slack = 1.0 / u.sample_rate;
    const auto& t = *job.timings;
    for (const WordTiming& w : t) {
      if (w.end_s() > u.duration_s + slack) {
        throw ValidationError("timing of '" + w.word + "' in '" + u.id +
                              "' ends after the utterance (" + std::to_string(w.end_s()) +
                              " > " + std::to_string(u.duration_s) + ")");
      }
    }
    SegmentInventory& inv = partial[k];
    for (std::size_t i = 0; i < t.size(); ++i) {
      std::string key;
      for (std::size_t n = 1; n <= max_ngram && i + n <= t.size(); ++n) {
        if (n > 1) key += ' ';
        key += unicode::WordKey(t[i + n - 1].word);
        inv.Add(key, Occurrence{path, u.id, u.sample_rate, t[i].start_s,
                                t[i + n - 1].end_s() - t[i].start_s});
      }
    }
  });

  SegmentInventory inventory;
  for (SegmentInventory& p : partial) inventory.Merge(std::move(p));
  inventory.Finalize();
  return inventory;
}

}  // namespace csmix
