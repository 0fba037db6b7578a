// tests/acceptance/acceptance_main.cc

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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "csmix/audio.hpp"
#include "csmix/corpus.hpp"
#include "csmix/cs_metrics.hpp"
#include "csmix/render.hpp"
#include "csmix/scorer.hpp"
#include "csmix/text_mixer.hpp"
#include "csmix/unicode.hpp"
#include "csmix/wordalign.hpp"
#include "fixtures.hpp"
#include "metric_cases.hpp"
#include "oracles.hpp"

namespace csmix {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
  void Fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

void CheckRuntime(Outcome& o, Clock::time_point start, double limit_s, std::string& timing) {
  const double s = Seconds(start);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2fs (limit %.0fs)", s, limit_s);
  timing = buf;
  if (s >= limit_s) o.Fail("over the time limit");
}

// --- 1 ---------------------------------------------------------------------

Outcome Ac1(std::string& timing) {
  Outcome o;
  const auto start = Clock::now();
  std::size_t n = 0;
  for (const auto& c : testing::MetricCases()) {
    const auto toks = testing::TokensFromLetters(c.langs);
    const double got[3] = {Cmi(toks), IIndex(toks), MIndex(toks, c.k)};
    const double want[3] = {c.cmi, c.i_index, c.m_index};
    for (int m = 0; m < 3; ++m) {
      if (std::abs(got[m] - want[m]) > 1e-9) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "case %s index %d: got %.12f want %.12f", c.langs.c_str(),
                      m, got[m], want[m]);
        o.Fail(buf);
      }
    }
    ++n;
  }
  if (n < 20) o.Fail("only " + std::to_string(n) + " cases");
  CheckRuntime(o, start, 1.0, timing);
  if (o.pass) o.detail = std::to_string(n) + " utterances x 3 indices within 1e-9";
  return o;
}

// --- 2 ---------------------------------------------------------------------

Outcome Ac2(std::string& timing) {
  Outcome o;
  const auto start = Clock::now();
  std::mt19937_64 gen(2024);
  Manifest ref;
  Hypotheses hyps;
  std::vector<testing::OracleCounts> expected;
  for (int k = 0; k < 1000; ++k) {
    const std::size_t alpha = 1 + gen() % 6;
    std::vector<std::string> r(gen() % 21), h(gen() % 21);
    for (auto& u : r) u = std::string(1, static_cast<char>('a' + gen() % alpha));
    for (auto& u : h) u = std::string(1, static_cast<char>('a' + gen() % alpha));
    expected.push_back(testing::EditOracle(r, h));
    Utterance u;
    u.id = "p" + std::to_string(k);
    for (const auto& w : r) u.tokens.push_back({w, LangTag::kEn});
    u.text = JoinSurfaces(u.tokens);
    ref.utterances.push_back(u);
    std::string hyp;
    for (const auto& w : h) hyp += (hyp.empty() ? "" : " ") + w;
    hyps.emplace_back(u.id, hyp);
  }
  ValidateManifest(ref);
  const CorpusScore score = ScoreCorpus(ref, hyps, Metric::kWer, NormPolicy{});
  std::size_t errors = 0, n_ref = 0;
  for (std::size_t k = 0; k < expected.size(); ++k) {
    const EditCounts& c = score.utterances[k].report.counts;
    const auto& e = expected[k];
    if (c.correct != e.c || c.substitutions != e.s || c.deletions != e.d || c.insertions != e.i) {
      o.Fail("pair " + std::to_string(k) + " counts differ from oracle");
    }
    errors += e.s + e.d + e.i;
    n_ref += e.c + e.s + e.d;
  }
  const double pooled = 100.0 * static_cast<double>(errors) / static_cast<double>(n_ref);
  if (score.total.rate != pooled) o.Fail("pooled rate differs from sum-of-counts formula");
  CheckRuntime(o, start, 10.0, timing);
  if (o.pass) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "1000 pairs exact; pooled rate %.6f == %zu/%zu", pooled,
                  errors, n_ref);
    o.detail = buf;
  }
  return o;
}

// --- 3 ---------------------------------------------------------------------

bool SameAsOracle(const SentenceAlignment& a, const std::uint32_t* rows, std::size_t max_len,
                  std::vector<testing::Rect>& scratch) {
  scratch.clear();
  testing::BruteForcePhrasePairsMask(a.src_len, a.tgt_len, rows, max_len, scratch);
  const auto got = ExtractPhrasePairs(a, max_len);
  if (got.size() != scratch.size()) return false;
  for (std::size_t k = 0; k < got.size(); ++k) {
    const auto& [i1, i2, j1, j2] = scratch[k];
    if (got[k].src.first != i1 || got[k].src.last != i2 || got[k].tgt.first != j1 ||
        got[k].tgt.last != j2) {
      return false;
    }
  }
  return true;
}

Outcome Ac3(std::string& timing) {
  Outcome o;
  const auto start = Clock::now();
  std::vector<testing::Rect> scratch;
  std::size_t exhaustive = 0;
  SentenceAlignment a;
  a.links.reserve(25);
  for (std::size_t s = 1; s <= 5 && o.pass; ++s) {
    for (std::size_t t = 1; t <= 5 && o.pass; ++t) {
      const std::uint32_t cells = static_cast<std::uint32_t>(s * t);
      for (std::uint32_t subset = 0; subset < (1u << cells); ++subset) {
        a.src_len = s;
        a.tgt_len = t;
        a.links.clear();
        std::uint32_t rows[5] = {};
        for (std::uint32_t c = 0; c < cells; ++c) {
          if (subset >> c & 1u) {
            a.links.push_back({c / t, c % t});
            rows[c / t] |= 1u << (c % t);
          }
        }
        // Cycle the cap so short caps are exercised too.
        const std::size_t max_len = subset % 7 == 0 ? 1 + subset / 7 % 5 : kDefaultMaxPhraseLen;
        if (!SameAsOracle(a, rows, max_len, scratch)) {
          o.Fail("mismatch at lens (" + std::to_string(s) + "," + std::to_string(t) +
                 ") subset " + std::to_string(subset));
          break;
        }
        ++exhaustive;
      }
    }
  }
  std::mt19937_64 gen(3);
  for (int k = 0; k < 10000 && o.pass; ++k) {
    a.src_len = 1 + gen() % 8;
    a.tgt_len = 1 + gen() % 8;
    a.links.clear();
    std::uint32_t rows[8] = {};
    const unsigned density = 1 + gen() % 5;
    for (std::size_t i = 0; i < a.src_len; ++i) {
      for (std::size_t j = 0; j < a.tgt_len; ++j) {
        if (gen() % 8 < density) {
          a.links.push_back({i, j});
          rows[i] |= 1u << j;
        }
      }
    }
    const std::size_t max_len = 1 + gen() % 8;
    if (!SameAsOracle(a, rows, max_len, scratch)) o.Fail("random case " + std::to_string(k));
  }
  CheckRuntime(o, start, 60.0, timing);
  if (o.pass) o.detail = std::to_string(exhaustive) + " exhaustive + 10000 random alignments";
  return o;
}

// --- 4 ---------------------------------------------------------------------

// Independent re-check of a plan against the raw alignment links.
std::string PlanViolation(const MixPlan& p, std::size_t len, const SentenceAlignment& a,
                          const MixConfig& cfg) {
  std::vector<int> owner(len, -1);
  std::size_t replaced = 0;
  for (std::size_t r = 0; r < p.replacements.size(); ++r) {
    const Replacement& rep = p.replacements[r];
    if (rep.src.last >= len || rep.src.first > rep.src.last) return "span out of range";
    for (std::size_t i = rep.src.first; i <= rep.src.last; ++i) {
      if (owner[i] >= 0) return "overlap";
      owner[i] = static_cast<int>(r);
      ++replaced;
    }
    bool inside = false;
    for (const AlignmentLink& l : a.links) {
      const bool in_s = rep.src.Contains(l.src), in_t = rep.tgt.Contains(l.tgt);
      if (in_s != in_t) return "inconsistent pair";
      inside = inside || (in_s && in_t);
    }
    if (!inside) return "pair without a link";
  }
  for (std::size_t i = 1; i < len; ++i) {
    if (owner[i] >= 0 && owner[i - 1] >= 0 && owner[i] != owner[i - 1]) return "adjacent spans";
  }
  const double f = static_cast<double>(replaced) / static_cast<double>(len);
  if (std::abs(f - p.replaced_fraction) > 1e-12) return "replaced_fraction mismatch";
  const double slack = 1.0 / static_cast<double>(len);
  if (f < cfg.ratio_min - slack - 1e-12 || f > cfg.ratio_max + slack + 1e-12) {
    return "fraction out of bounds";
  }
  return {};
}

Outcome Ac4(const testing::FixtureCorpus& fx, std::string& timing) {
  Outcome o;
  const auto start = Clock::now();
  MixConfig cfg;
  cfg.seed = 4;
  const MixCorpusResult r = MixCorpus(fx.src, fx.tgt, fx.alignments, LangTag::kEn, cfg, 4);
  std::set<std::string> accounted;
  for (const MixPlan& p : r.plans) {
    const auto i = fx.src.Find(p.utt_id);
    if (!i) {
      o.Fail("plan for unknown id " + p.utt_id);
      continue;
    }
    const std::string v = PlanViolation(p, fx.src.utterances[*i].tokens.size(), fx.alignments[*i], cfg);
    if (!v.empty()) o.Fail(p.utt_id + ": " + v);
    if (!accounted.insert(p.utt_id).second) o.Fail("duplicate plan " + p.utt_id);
  }
  for (const MixSkip& s : r.skips) {
    if (s.reason.empty()) o.Fail("skip without reason");
    if (!accounted.insert(s.utt_id).second) o.Fail("utterance both planned and skipped " + s.utt_id);
  }
  if (accounted.size() != fx.src.utterances.size()) o.Fail("skip report incomplete");
  CheckRuntime(o, start, 30.0, timing);
  if (o.pass) {
    o.detail = std::to_string(r.plans.size()) + " plans valid, " + std::to_string(r.skips.size()) +
               " skips, all " + std::to_string(fx.src.utterances.size()) + " accounted";
  }
  return o;
}

// --- 5 ---------------------------------------------------------------------

Outcome Ac5(const testing::FixtureCorpus& fx) {
  Outcome o;
  MixConfig cfg;
  cfg.seed = 5;
  cfg.ratio_min = 0.10;
  cfg.ratio_max = 0.30;
  const MixCorpusResult phrase = MixCorpus(fx.src, fx.tgt, fx.alignments, LangTag::kEn, cfg);
  const SentenceMixResult sentence = SentenceMix(fx.src, fx.en, 2, 0.0, 5);
  const CsStats p = CorpusStats(phrase.mixed);
  const CsStats s = CorpusStats(sentence.mixed);
  char buf[160];
  std::snprintf(buf, sizeof(buf), "phrase-mixed I-Index %.2f vs sentence-mixed %.2f", p.i_index,
                s.i_index);
  o.detail = buf;
  if (!(p.i_index > s.i_index)) o.Fail(buf);
  return o;
}

// --- 6 ---------------------------------------------------------------------

Outcome Ac6(const testing::FixtureCorpus& fx, std::string& timing) {
  Outcome o;
  const auto start = Clock::now();
  const fs::path src_manifest = fx.root / "src" / "manifest.jsonl";
  const TimingTable host_ctm = ParseCtmFile(fx.root / "src" / "words.ctm");
  DonorCorpus donor;
  donor.manifest_path = fx.root / "donor" / "manifest.jsonl";
  donor.manifest = ReadManifest(donor.manifest_path);
  donor.timings = ParseCtmFile(fx.root / "donor" / "words.ctm");
  const SegmentInventory inventory = BuildSegmentInventory({donor});
  std::vector<const Occurrence*> donor_words;
  for (const auto& [key, occ] : inventory.entries()) {
    if (key.find(' ') == std::string::npos) donor_words.push_back(&occ.front());
  }
  AudioCache cache;

  // Closed-form arithmetic and donor peaks on spliced fixture segments.
  std::mt19937_64 gen(6);
  std::size_t splices = 0, donors_checked = 0;
  for (std::size_t u = 0; u < 150 && u < fx.src.utterances.size(); ++u) {
    const Utterance& utt = fx.src.utterances[u];
    const AudioHandle host = cache.Get(ResolveAudioPath(src_manifest, *utt.audio_path).string());
    const auto& words = host_ctm.at(utt.id);
    SpliceConfig cfg;
    cfg.crossfade_ms = static_cast<double>(gen() % 3) * 5.0;
    cfg.inter_segment_silence_ms = static_cast<double>(gen() % 3) * 20.0;
    if (gen() % 4 == 0) cfg.target_peak = {TargetPeakPolicy::Kind::kFixed, 0.3f + 0.1f * (gen() % 6)};
    std::vector<Segment> segs;
    double expected_s = 0.0;
    for (const WordTiming& w : words) {
      if (gen() % 3 == 0) {
        const Occurrence& occ = *donor_words[gen() % donor_words.size()];
        segs.push_back({Cut(*cache.Get(occ.audio_path), occ.start_s, occ.dur_s), SegmentRole::kDonor});
        expected_s += occ.dur_s;
      } else {
        segs.push_back({Cut(*host, w.start_s, w.dur_s), SegmentRole::kHost});
        expected_s += w.dur_s;
      }
    }
    const double k = static_cast<double>(segs.size());
    expected_s += (k - 1) * (cfg.inter_segment_silence_ms - cfg.crossfade_ms) / 1000.0;
    SpliceInfo info;
    const AudioBuffer out = Splice(segs, cfg, &info);
    ++splices;
    const double expected_samples = expected_s * out.sample_rate;
    if (std::abs(static_cast<double>(out.size()) - expected_samples) > 1.0) {
      o.Fail(utt.id + ": length " + std::to_string(out.size()) + " vs closed form " +
             std::to_string(expected_samples));
    }
    if (Peak(out.samples) > kMaxAbsSample) o.Fail(utt.id + ": sample above 1 - 1e-6");

    const float target = SelectTargetPeak(segs, cfg.target_peak);
    std::size_t offset = 0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
      const std::size_t n = segs[i].audio.size();
      if (segs[i].role == SegmentRole::kDonor) {
        const float normalized = Peak(NormalizeAmplitude(segs[i].audio, target).samples);
        // Interior of the segment in the output, away from crossfades.
        const std::size_t fade = info.crossfade_samples;
        const float in_output =
            Peak(std::span(out.samples).subspan(offset + fade, n - 2 * fade)) / info.output_rescale;
        if (std::abs(normalized - target) > 1e-6f || std::abs(in_output - target) > 1e-6f) {
          o.Fail(utt.id + ": donor peak " + std::to_string(in_output) + " vs target " +
                 std::to_string(target));
        }
        ++donors_checked;
      }
      offset += n + info.silence_samples - info.crossfade_samples;
    }
  }

  // Full renders of phrase-mixed plans: headroom on every emitted sample.
  MixConfig mcfg;
  mcfg.seed = 6;
  const MixCorpusResult mixed = MixCorpus(fx.src, fx.tgt, fx.alignments, LangTag::kEn, mcfg);
  std::size_t rendered = 0;
  for (const MixPlan& plan : mixed.plans) {
    const Utterance& utt = fx.src.utterances[*fx.src.Find(plan.utt_id)];
    const AudioHandle host = cache.Get(ResolveAudioPath(src_manifest, *utt.audio_path).string());
    const RenderResult r = RenderMixedUtterance(utt, *host, host_ctm.at(utt.id), plan, inventory,
                                                cache.Loader(), SpliceConfig{}, 6);
    if (!r.audio) continue;
    ++rendered;
    if (Peak(r.audio->samples) > kMaxAbsSample) o.Fail(utt.id + ": rendered sample above limit");
  }
  if (rendered == 0) o.Fail("nothing rendered");
  CheckRuntime(o, start, 10.0, timing);
  if (o.pass) {
    o.detail = std::to_string(splices) + " splices, " + std::to_string(donors_checked) +
               " donor peaks, " + std::to_string(rendered) + " full renders";
  }
  return o;
}

// --- 7 ---------------------------------------------------------------------

Outcome Ac7(const testing::FixtureCorpus& fx) {
  Outcome o;
  std::mt19937_64 gen(7);
  const fs::path src_manifest = fx.root / "src" / "manifest.jsonl";
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Utterance& utt = fx.src.utterances[gen() % fx.src.utterances.size()];
    const AudioBuffer clean = ReadWav(ResolveAudioPath(src_manifest, *utt.audio_path));
    AudioBuffer noise;
    noise.sample_rate = clean.sample_rate;
    noise.samples.resize(clean.size() / 4 + gen() % (2 * clean.size()));
    std::normal_distribution<double> gauss(0.0, 0.05 + 0.3 * (gen() % 100) / 100.0);
    for (float& x : noise.samples) x = static_cast<float>(gauss(gen));
    const double snr = 10.0 + 20.0 * static_cast<double>(gen() % 100001) / 100000.0;
    Rng rng = Rng(7).With(static_cast<std::uint64_t>(trial));
    NoiseMixInfo info;
    // Measure on what a writer would emit: the 16-bit WAV.
    const AudioBuffer out = DecodeWav(EncodeWav(MixNoise(clean, noise, snr, rng, &info)));
    std::vector<float> c(clean.size()), n(clean.size());
    for (std::size_t i = 0; i < clean.size(); ++i) {
      c[i] = clean.samples[i] * info.output_rescale;
      n[i] = out.samples[i] - c[i];
    }
    const double measured = 10.0 * std::log10(Power(c) / Power(n));
    worst = std::max(worst, std::abs(measured - snr));
    if (std::abs(measured - snr) > 0.1) {
      o.Fail("trial " + std::to_string(trial) + ": requested " + std::to_string(snr) +
             " measured " + std::to_string(measured));
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "100 trials, worst |error| %.5f dB", worst);
  if (o.pass) o.detail = buf;
  return o;
}

// --- 8 ---------------------------------------------------------------------

int RunCli(const std::vector<std::string>& args) {
  std::vector<std::string> full = {"csmix"};
  full.insert(full.end(), args.begin(), args.end());
  std::ostringstream out, err;
  return cli::Run(full, out, err);
}

Outcome Ac8(const testing::FixtureCorpus& fx) {
  Outcome o;
  const fs::path root = fx.root;
  for (const char* w : {"1", "16"}) {
    const std::string out = (root / ("det-w" + std::string(w))).string();
    if (RunCli({"--out", out, "--seed", "99", "--workers", w, "mix-text", "--manifest",
                (root / "src/manifest.jsonl").string(), "--tgt-text", (root / "tgt.txt").string(),
                "--align", (root / "align.txt").string()}) != 0 ||
        RunCli({"--out", out, "--seed", "99", "--workers", w, "splice", "--plans",
                out + "/plans.jsonl", "--manifest", (root / "src/manifest.jsonl").string(),
                "--ctm", (root / "src/words.ctm").string(), "--donor",
                (root / "donor").string()}) != 0) {
      o.Fail(std::string("CLI failed with --workers ") + w);
      return o;
    }
  }
  const fs::path a = root / "det-w1", b = root / "det-w16";
  std::size_t files = 0;
  for (const char* f : {"mixed.jsonl", "plans.jsonl", "skips.jsonl", "spliced.jsonl",
                        "render_report.jsonl"}) {
    if (testing::ReadFileBytes(a / f) != testing::ReadFileBytes(b / f)) o.Fail(std::string(f) + " differs");
    ++files;
  }
  std::set<std::string> wa, wb;
  for (const auto& e : fs::directory_iterator(a / "audio")) wa.insert(e.path().filename().string());
  for (const auto& e : fs::directory_iterator(b / "audio")) wb.insert(e.path().filename().string());
  if (wa != wb || wa.empty()) o.Fail("different WAV sets");
  for (const std::string& name : wa) {
    if (testing::ReadFileBytes(a / "audio" / name) != testing::ReadFileBytes(b / "audio" / name)) {
      o.Fail(name + " differs");
    }
    ++files;
  }
  if (o.pass) o.detail = std::to_string(files) + " files byte-identical (workers 1 vs 16)";
  return o;
}

// --- 9 ---------------------------------------------------------------------

Outcome Ac9() {
  Outcome o;
  const std::vector<std::pair<std::string, std::string>> pairs = {
      {"a b c", "a b c d e f g"},
      {"saya suka nasi", "saya uh suka uh uh makan nasi lemak sedap"},
      {"x", "y z w"}};
  std::string detail;
  for (const auto& [ref, hyp] : pairs) {
    ScoreReport r;
    try {
      r = ScorePair(ref, hyp, Metric::kWer, NormPolicy{});
    } catch (const std::exception& e) {
      o.Fail(std::string("threw: ") + e.what());
      continue;
    }
    const auto e = testing::EditOracle(unicode::SplitWhitespace(ref), unicode::SplitWhitespace(hyp));
    const double want = 100.0 * static_cast<double>(e.s + e.d + e.i) / static_cast<double>(e.c + e.s + e.d);
    if (!(r.rate > 100.0) || std::abs(r.rate - want) > 1e-9) {
      o.Fail("'" + ref + "' vs '" + hyp + "': rate " + std::to_string(r.rate) + " oracle " +
             std::to_string(want));
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s%.2f%%", detail.empty() ? "" : ", ", r.rate);
    detail += buf;
  }
  if (o.pass) o.detail = "WER " + detail + " match oracle";
  return o;
}

}  // namespace
}  // namespace csmix

int main() {
  using namespace csmix;
  testing::TempDir dir("csmix-acceptance");
  testing::FixtureOptions opts;
  opts.sentences = 1000;
  opts.seed = 42;
  const testing::FixtureCorpus text_fx = testing::MakeFixtureCorpus(dir / "text", opts);
  opts.sentences = 200;
  opts.seed = 43;
  opts.with_audio = true;
  const testing::FixtureCorpus audio_fx = testing::MakeFixtureCorpus(dir / "audio", opts);

  struct Row {
    int id;
    const char* name;
    std::function<Outcome(std::string&)> run;
  };
  const std::vector<Row> rows = {
      {1, "metrics oracle suite", [](std::string& t) { return Ac1(t); }},
      {2, "edit-distance oracle", [](std::string& t) { return Ac2(t); }},
      {3, "phrase extraction oracle", [](std::string& t) { return Ac3(t); }},
      {4, "mix-plan invariants", [&](std::string& t) { return Ac4(text_fx, t); }},
      {5, "phrase vs sentence I-Index ordering", [&](std::string&) { return Ac5(text_fx); }},
      {6, "splice audio invariants", [&](std::string& t) { return Ac6(audio_fx, t); }},
      {7, "SNR accuracy", [&](std::string&) { return Ac7(audio_fx); }},
      {8, "determinism across workers", [&](std::string&) { return Ac8(audio_fx); }},
      {9, "WER above 100%", [](std::string&) { return Ac9(); }},
  };
  int failures = 0;
  for (const Row& row : rows) {
    std::string timing;
    Outcome o;
    try {
      o = row.run(timing);
    } catch (const std::exception& e) {
      o.Fail(std::string("exception: ") + e.what());
    }
    std::printf("AC%d %s: %s -- %s%s%s\n", row.id, o.pass ? "PASS" : "FAIL", row.name,
                o.detail.c_str(), timing.empty() ? "" : "; ", timing.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(rows.size()) - failures, rows.size());
  return failures == 0 ? 0 : 1;
}
