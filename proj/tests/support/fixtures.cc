// tests/support/fixtures.cc

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

#include "fixtures.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <numbers>
#include <random>
#include <sstream>
#include <utility>

#include "csmix/rng.hpp"

namespace csmix::testing {

namespace fs = std::filesystem;

TempDir::TempDir(const std::string& prefix) {
  static std::atomic<int> counter{0};
  std::random_device rd;
  for (;;) {
    path_ = fs::temp_directory_path() /
            (prefix + "-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    if (fs::create_directories(path_)) break;
  }
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::string ReadFileBytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

AudioBuffer SynthesizeWord(const std::string& word, float amplitude, int sample_rate) {
  const std::uint64_t h = Fnv1a64(word);
  const double freq = 180.0 + static_cast<double>(h % 600);
  const double dur = 0.12 + 0.01 * static_cast<double>((h >> 16) % 20);
  const auto n = static_cast<std::size_t>(std::llround(dur * sample_rate));
  AudioBuffer out;
  out.sample_rate = sample_rate;
  out.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    const double window = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * (i + 0.5) / n);
    out.samples[i] = static_cast<float>(amplitude * window *
                                        std::sin(2.0 * std::numbers::pi * freq * t));
  }
  return out;
}

SpokenUtterance Speak(const std::string& utt_id, const std::vector<std::string>& words,
                      float level, int sample_rate) {
  constexpr double kEdge = 0.10, kGap = 0.05;
  SpokenUtterance out;
  out.audio.sample_rate = sample_rate;
  auto silence = [&](double s) {
    out.audio.samples.insert(out.audio.samples.end(),
                             static_cast<std::size_t>(std::llround(s * sample_rate)), 0.0f);
  };
  silence(kEdge);
  for (std::size_t k = 0; k < words.size(); ++k) {
    const std::uint64_t h = Fnv1a64(utt_id + "/" + std::to_string(k));
    const float amp = level * (0.7f + 0.3f * static_cast<float>(h % 1000) / 1000.0f);
    const AudioBuffer w = SynthesizeWord(words[k], amp, sample_rate);
    const double start = out.audio.duration_s();
    out.timings.push_back({utt_id, words[k], start, w.duration_s()});
    out.audio.samples.insert(out.audio.samples.end(), w.samples.begin(), w.samples.end());
    silence(k + 1 < words.size() ? kGap : kEdge);
  }
  return out;
}

namespace {

struct Entry {
  const char* bm;
  std::vector<const char*> en;
};

const std::vector<Entry>& Dictionary() {
  static const std::vector<Entry> dict = {
      {"saya", {"i"}},          {"kami", {"we"}},          {"dia", {"he"}},
      {"mereka", {"they"}},     {"suka", {"like"}},        {"makan", {"eat"}},
      {"nasi", {"rice"}},       {"minum", {"drink"}},      {"air", {"water"}},
      {"sekolah", {"school"}},  {"rumah", {"house"}},      {"besar", {"big"}},
      {"kecil", {"small"}},     {"kucing", {"cat"}},       {"anjing", {"dog"}},
      {"buku", {"book"}},       {"baca", {"read"}},        {"cepat", {"quickly"}},
      {"pagi", {"morning"}},    {"malam", {"night"}},      {"kerja", {"work"}},
      {"kawan", {"friend"}},    {"baru", {"new"}},         {"pasar", {"market"}},
      {"beli", {"buy"}},        {"ikan", {"fish"}},        {"bermain", {"play", "with"}},
      {"semalam", {"last", "night"}}, {"esok", {"tomorrow"}}, {"pergi", {"go", "to"}},
  };
  return dict;
}

void WriteLines(const fs::path& path, const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary);
  for (const std::string& l : lines) out << l << '\n';
}

std::string CtmLine(const WordTiming& t) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%s 1 %.2f %.2f %s", t.utt_id.c_str(), t.start_s, t.dur_s,
                t.word.c_str());
  return buf;
}

}  // namespace

FixtureCorpus MakeFixtureCorpus(const fs::path& root, const FixtureOptions& opts) {
  FixtureCorpus fx;
  fx.root = root;
  fs::create_directories(root / "src");
  std::mt19937_64 rng(opts.seed);
  auto uniform = [&](std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
  };
  auto chance = [&](double p) { return static_cast<double>(rng() % 10000) < p * 10000.0; };
  const auto& dict = Dictionary();

  std::vector<std::string> tgt_lines, align_lines, src_ctm;
  if (opts.with_audio) fs::create_directories(root / "src" / "audio");

  for (std::size_t s = 0; s < opts.sentences; ++s) {
    char id_buf[32];
    std::snprintf(id_buf, sizeof(id_buf), "bm-%05zu", s);
    const std::string id = id_buf;
    const std::size_t n = uniform(opts.min_words, opts.max_words);

    std::vector<std::size_t> picks(n);
    for (auto& p : picks) p = uniform(0, dict.size() - 1);

    // Target chunks: (words, source index or npos for unaligned words).
    struct Chunk {
      std::vector<std::string> words;
      std::size_t src;
    };
    std::vector<Chunk> chunks;
    for (std::size_t i = 0; i < n; ++i) {
      if (chance(0.15)) chunks.push_back({{"the"}, std::string::npos});
      Chunk c{{}, i};
      for (const char* w : dict[picks[i]].en) c.words.emplace_back(w);
      chunks.push_back(std::move(c));
    }
    for (std::size_t k = 0; k + 1 < chunks.size(); ++k) {
      if (chance(0.12)) {
        std::swap(chunks[k], chunks[k + 1]);
        ++k;
      }
    }
    const bool period = chance(0.3);

    Utterance u;
    u.id = id;
    u.sample_rate = opts.sample_rate;
    std::vector<std::string> spoken;
    for (std::size_t p : picks) {
      u.tokens.push_back({dict[p].bm, LangTag::kBm});
      spoken.emplace_back(dict[p].bm);
    }
    if (period) u.tokens.push_back({".", LangTag::kNeutral});
    u.text = JoinSurfaces(u.tokens);

    std::vector<std::string> tgt;
    SentenceAlignment a;
    for (const Chunk& c : chunks) {
      for (const std::string& w : c.words) {
        if (c.src != std::string::npos) a.links.push_back({c.src, tgt.size()});
        tgt.push_back(w);
      }
    }
    if (period) {
      a.links.push_back({n, tgt.size()});
      tgt.emplace_back(".");
    }
    a.src_len = u.tokens.size();
    a.tgt_len = tgt.size();
    a.Canonicalize();

    std::string line;
    for (const AlignmentLink& l : a.links) {
      if (!line.empty()) line += ' ';
      line += std::to_string(l.src) + "-" + std::to_string(l.tgt);
    }
    align_lines.push_back(line);
    std::string tgt_line;
    for (const std::string& w : tgt) tgt_line += (tgt_line.empty() ? "" : " ") + w;
    tgt_lines.push_back(tgt_line);

    if (opts.with_audio) {
      const float level = 0.2f + 0.6f * static_cast<float>(rng() % 1000) / 1000.0f;
      SpokenUtterance sp = Speak(id, spoken, level, opts.sample_rate);
      const std::string rel = "audio/" + id + ".wav";
      WriteWav(sp.audio, root / "src" / rel);
      u.audio_path = rel;
      u.duration_s = sp.audio.duration_s();
      for (const WordTiming& t : sp.timings) src_ctm.push_back(CtmLine(t));
    } else {
      u.duration_s = 0.4 * static_cast<double>(n);
    }

    Utterance en;
    en.id = "en-" + id.substr(3);
    en.sample_rate = opts.sample_rate;
    en.duration_s = 0.4 * static_cast<double>(tgt.size());
    for (const std::string& w : tgt) {
      en.tokens.push_back({w, w == "." ? LangTag::kNeutral : LangTag::kEn});
    }
    en.text = JoinSurfaces(en.tokens);
    fx.en.utterances.push_back(std::move(en));

    fx.src.utterances.push_back(std::move(u));
    fx.tgt.push_back(std::move(tgt));
    fx.alignments.push_back(std::move(a));
  }
  ValidateManifest(fx.src);
  ValidateManifest(fx.en);
  WriteManifest(fx.src, root / "src" / "manifest.jsonl");
  fs::create_directories(root / "en");
  WriteManifest(fx.en, root / "en" / "manifest.jsonl");
  WriteLines(root / "tgt.txt", tgt_lines);
  WriteLines(root / "align.txt", align_lines);

  if (opts.with_audio) {
    WriteLines(root / "src" / "words.ctm", src_ctm);
    // Donor corpus: every EN word spoken several times, plus the two-word
    // phrases so phrase-level donors exist.
    fs::create_directories(root / "donor" / "audio");
    std::vector<std::string> vocab;
    for (const Entry& e : dict) {
      for (const char* w : e.en) vocab.emplace_back(w);
    }
    vocab.emplace_back("the");
    Manifest donor;
    std::vector<std::string> donor_ctm;
    for (std::size_t d = 0; d < 24; ++d) {
      std::vector<std::string> words;
      for (std::size_t k = 0; k < 6; ++k) words.push_back(vocab[(d * 5 + k * 7) % vocab.size()]);
      for (const Entry& e : dict) {
        if (e.en.size() > 1 && (d % 3 == 0)) {
          for (const char* w : e.en) words.emplace_back(w);
        }
      }
      char id_buf[32];
      std::snprintf(id_buf, sizeof(id_buf), "en-donor-%03zu", d);
      const float level = 0.15f + 0.03f * static_cast<float>(d);
      SpokenUtterance sp = Speak(id_buf, words, level, opts.sample_rate);
      const std::string rel = std::string("audio/") + id_buf + ".wav";
      WriteWav(sp.audio, root / "donor" / rel);
      Utterance u;
      u.id = id_buf;
      u.audio_path = rel;
      u.sample_rate = opts.sample_rate;
      u.duration_s = sp.audio.duration_s();
      for (const std::string& w : words) u.tokens.push_back({w, LangTag::kEn});
      u.text = JoinSurfaces(u.tokens);
      donor.utterances.push_back(std::move(u));
      for (const WordTiming& t : sp.timings) donor_ctm.push_back(CtmLine(t));
    }
    ValidateManifest(donor);
    WriteManifest(donor, root / "donor" / "manifest.jsonl");
    WriteLines(root / "donor" / "words.ctm", donor_ctm);
  }
  return fx;
}

}  // namespace csmix::testing
