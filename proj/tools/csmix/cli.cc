// tools/csmix/cli.cc

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

#include "cli.hpp"

#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "csmix/audio.hpp"
#include "csmix/corpus.hpp"
#include "csmix/cs_metrics.hpp"
#include "csmix/error.hpp"
#include "csmix/parallel.hpp"
#include "csmix/render.hpp"
#include "csmix/scorer.hpp"
#include "csmix/text_mixer.hpp"
#include "csmix/unicode.hpp"
#include "csmix/wordalign.hpp"
#include "json.hpp"

namespace csmix::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct GlobalOptions {
  std::uint64_t seed = 0;
  int workers = 1;
  std::string out = "csmix-out";
  std::string log_level = "info";
};

struct Context {
  GlobalOptions global;
  std::shared_ptr<spdlog::logger> log;
  std::ostream* out = nullptr;
  fs::path out_dir;
};

void EnsureDir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw IoError("write error on " + path.string());
}

// Utterance ids may contain characters that are awkward in file names.
std::string FileStem(const std::string& id) {
  std::string out = id;
  for (char& c : out) {
    if (c == '/' || c == '\\' || c == ':' || c == '\0') c = '_';
  }
  if (out == "." || out == "..") out = "_" + out;
  return out;
}

void WriteRunConfig(const Context& ctx, const CLI::App& app, const CLI::App& sub,
                    const std::vector<std::string>& args) {
  ordered_json echo;
  echo["tool"] = "csmix";
  echo["version"] = CSMIX_VERSION;
  echo["command"] = sub.get_name();
  echo["argv"] = args;
  ordered_json global;
  global["seed"] = ctx.global.seed;
  global["workers"] = ctx.global.workers;
  global["out"] = ctx.global.out;
  global["log_level"] = ctx.global.log_level;
  echo["global"] = std::move(global);
  ordered_json options;
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_lnames().empty() || opt->get_lnames()[0] == "help") continue;
    const std::string& name = opt->get_lnames()[0];
    if (opt->count() > 0) {
      const auto& results = opt->results();
      if (opt->get_expected_max() > 1) {
        options[name] = results;
      } else if (opt->get_type_size() == 0) {
        options[name] = true;
      } else {
        options[name] = results.empty() ? std::string() : results.back();
      }
    } else if (opt->get_type_size() == 0) {
      options[name] = false;
    } else {
      options[name] = opt->get_default_str();
    }
  }
  echo["options"] = std::move(options);
  (void)app;
  WriteText(ctx.out_dir / "run_config.json", echo.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// validate

struct ValidateOptions {
  std::string manifest;
  bool check_audio = false;
};

int CmdValidate(Context& ctx, const ValidateOptions& o) {
  Manifest m = ReadManifest(o.manifest);
  std::size_t problems = 0;
  if (o.check_audio) {
    for (const Utterance& u : m.utterances) {
      if (!u.audio_path) continue;
      const fs::path path = ResolveAudioPath(o.manifest, *u.audio_path);
      if (!fs::exists(path)) {
        ctx.log->error("{}: audio file {} does not exist", u.id, path.string());
        ++problems;
        continue;
      }
      WavInfo info;
      try {
        info = ReadWavInfo(path);
      } catch (const Error& e) {
        ctx.log->error("{}: {}", u.id, e.what());
        ++problems;
        continue;
      }
      if (info.sample_rate != u.sample_rate) {
        ctx.log->error("{}: WAV sample rate {} differs from manifest {}", u.id, info.sample_rate,
                       u.sample_rate);
        ++problems;
      }
      const double expected = u.duration_s * info.sample_rate;
      if (std::abs(static_cast<double>(info.num_samples) - expected) > 1.0) {
        ctx.log->error("{}: WAV has {} samples, manifest duration implies {:.1f}", u.id,
                       info.num_samples, expected);
        ++problems;
      }
    }
  }
  if (problems > 0) {
    *ctx.out << "INVALID " << o.manifest << ": " << problems << " audio problem(s)\n";
    return kExitValidation;
  }
  std::string langs;
  for (LangTag l : m.language_inventory) {
    if (!langs.empty()) langs += ",";
    langs += ToString(l);
  }
  *ctx.out << "OK " << o.manifest << ": " << m.utterances.size() << " utterances, "
           << m.Hours() << " hours, languages {" << langs << "}\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// mix-text

struct MixTextOptions {
  std::string manifest;
  std::string tgt_text;
  std::string align;
  std::string tgt_lang = "EN";
  double ratio_min = 0.10;
  double ratio_max = 0.30;
  std::size_t min_len = 4;
  std::size_t max_phrase_len = kDefaultMaxPhraseLen;
  std::string keep_list;
};

int CmdMixText(Context& ctx, const MixTextOptions& o) {
  MixConfig cfg;
  cfg.ratio_min = o.ratio_min;
  cfg.ratio_max = o.ratio_max;
  cfg.min_sentence_len = o.min_len;
  cfg.max_phrase_len = o.max_phrase_len;
  cfg.seed = ctx.global.seed;
  cfg.Validate();
  const LangTag tgt_lang = LangTagFromString(o.tgt_lang);
  if (!o.keep_list.empty()) {
    std::ifstream in(o.keep_list);
    if (!in) throw IoError("cannot open keep list " + o.keep_list);
    for (std::string w; in >> w;) cfg.keep_words.insert(unicode::WordKey(w));
  }

  const Manifest src = ReadManifest(o.manifest);
  const auto tgt = ReadParallelText(o.tgt_text);
  if (tgt.size() != src.utterances.size()) {
    throw ValidationError("input count mismatch: " + std::to_string(src.utterances.size()) +
                          " utterances but " + std::to_string(tgt.size()) + " target lines");
  }
  std::vector<std::size_t> src_lens, tgt_lens;
  for (std::size_t i = 0; i < tgt.size(); ++i) {
    src_lens.push_back(src.utterances[i].tokens.size());
    tgt_lens.push_back(tgt[i].size());
  }
  const auto alignments = ParseAlignmentFile(o.align, src_lens, tgt_lens);

  const MixCorpusResult result =
      MixCorpus(src, tgt, alignments, tgt_lang, cfg, ctx.global.workers);
  WriteManifest(result.mixed, ctx.out_dir / "mixed.jsonl");
  WritePlans(result.plans, ctx.out_dir / "plans.jsonl");
  WriteSkips(result.skips, ctx.out_dir / "skips.jsonl");
  ctx.log->info("mixed {} of {} utterances, {} skipped", result.plans.size(),
                src.utterances.size(), result.skips.size());
  *ctx.out << "mixed " << result.plans.size() << " skipped " << result.skips.size() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// splice

struct SpliceOptions {
  std::string plans;
  std::string manifest;
  std::string ctm;
  std::vector<std::string> donors;
  std::string tgt_lang = "EN";
  std::string norm = "peak";
  double crossfade_ms = 10.0;
  double silence_ms = 0.0;
  std::string target_peak = "median";
  std::size_t max_ngram = kDefaultMaxPhraseLen;
};

SpliceConfig MakeSpliceConfig(const SpliceOptions& o) {
  SpliceConfig cfg;
  if (o.norm == "peak") {
    cfg.norm_mode = NormMode::kPeak;
  } else if (o.norm == "off") {
    cfg.norm_mode = NormMode::kOff;
  } else {
    throw ValidationError("--norm must be 'peak' or 'off'");
  }
  cfg.crossfade_ms = o.crossfade_ms;
  cfg.inter_segment_silence_ms = o.silence_ms;
  if (o.crossfade_ms < 0.0 || o.silence_ms < 0.0) {
    throw ValidationError("--crossfade-ms and --silence-ms must be >= 0");
  }
  if (o.target_peak == "median") {
    cfg.target_peak.kind = TargetPeakPolicy::Kind::kMedianHostPeak;
  } else {
    cfg.target_peak.kind = TargetPeakPolicy::Kind::kFixed;
    try {
      cfg.target_peak.value = std::stof(o.target_peak);
    } catch (const std::exception&) {
      throw ValidationError("--target-peak must be 'median' or a number in (0, 1]");
    }
    if (!(cfg.target_peak.value > 0.0f && cfg.target_peak.value <= 1.0f)) {
      throw ValidationError("--target-peak must be in (0, 1]");
    }
  }
  return cfg;
}

std::vector<DonorCorpus> LoadDonors(const std::vector<std::string>& dirs) {
  std::vector<DonorCorpus> donors;
  for (const std::string& dir : dirs) {
    DonorCorpus d;
    d.manifest_path = fs::path(dir) / "manifest.jsonl";
    d.manifest = ReadManifest(d.manifest_path);
    d.timings = ParseCtmFile(fs::path(dir) / "words.ctm");
    donors.push_back(std::move(d));
  }
  return donors;
}

int CmdSplice(Context& ctx, const SpliceOptions& o) {
  const SpliceConfig cfg = MakeSpliceConfig(o);
  const LangTag tgt_lang = LangTagFromString(o.tgt_lang);
  const auto plans = ReadPlans(o.plans);
  const Manifest src = ReadManifest(o.manifest);
  const TimingTable src_timings = ParseCtmFile(o.ctm);
  const auto donors = LoadDonors(o.donors);
  const SegmentInventory inventory = BuildSegmentInventory(donors, o.max_ngram, ctx.global.workers);
  ctx.log->info("inventory: {} entries from {} donor corpora", inventory.size(), donors.size());

  std::vector<std::size_t> src_index(plans.size());
  for (std::size_t p = 0; p < plans.size(); ++p) {
    auto idx = src.Find(plans[p].utt_id);
    if (!idx) throw ValidationError("plan utterance '" + plans[p].utt_id + "' not in " + o.manifest);
    if (!src.utterances[*idx].audio_path) {
      throw ValidationError("source utterance '" + plans[p].utt_id + "' has no audio");
    }
    src_index[p] = *idx;
  }

  EnsureDir(ctx.out_dir / "audio");
  AudioCache cache;
  const AudioLoader loader = cache.Loader();
  std::vector<RenderReport> reports(plans.size());
  std::vector<std::optional<Utterance>> rendered(plans.size());
  static const std::vector<WordTiming> kNoTimings;

  ParallelFor(plans.size(), ctx.global.workers, [&](std::size_t p) {
    const MixPlan& plan = plans[p];
    const Utterance& u = src.utterances[src_index[p]];
    auto t = src_timings.find(u.id);
    if (t == src_timings.end()) {
      reports[p].utt_id = u.id;
      reports[p].skipped = "no source timings";
      return;
    }
    const AudioBuffer audio = ReadWav(ResolveAudioPath(o.manifest, *u.audio_path));
    RenderResult r = RenderMixedUtterance(u, audio, t->second, plan, inventory, loader, cfg,
                                          ctx.global.seed);
    if (r.audio) {
      const std::string rel = "audio/" + FileStem(u.id) + ".wav";
      WriteWav(*r.audio, ctx.out_dir / rel);
      Utterance mixed = ApplyMix(u, plan, tgt_lang);
      mixed.audio_path = rel;
      mixed.sample_rate = r.audio->sample_rate;
      mixed.duration_s = r.audio->duration_s();
      rendered[p] = std::move(mixed);
    }
    reports[p] = std::move(r.report);
  });

  Manifest out;
  std::size_t skipped = 0;
  for (std::size_t p = 0; p < plans.size(); ++p) {
    if (rendered[p]) {
      out.utterances.push_back(std::move(*rendered[p]));
    } else {
      ++skipped;
      ctx.log->warn("skipped {}: {}", reports[p].utt_id, reports[p].skipped.value_or("?"));
    }
  }
  ValidateManifest(out);
  WriteManifest(out, ctx.out_dir / "spliced.jsonl");
  WriteRenderReports(reports, ctx.out_dir / "render_report.jsonl");
  *ctx.out << "rendered " << out.utterances.size() << " skipped " << skipped << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// sentence-mix

struct SentenceMixOptions {
  std::string a;
  std::string b;
  std::size_t per_output = 2;
  double gap_s = 0.0;
  bool render = false;
};

int CmdSentenceMix(Context& ctx, const SentenceMixOptions& o) {
  const Manifest a = ReadManifest(o.a);
  const Manifest b = ReadManifest(o.b);
  SentenceMixResult result = SentenceMix(a, b, o.per_output, o.gap_s, ctx.global.seed);

  if (o.render) {
    EnsureDir(ctx.out_dir / "audio");
    AudioCache cache;
    ParallelFor(result.plans.size(), ctx.global.workers, [&](std::size_t k) {
      const ConcatPlan& plan = result.plans[k];
      std::vector<AudioBuffer> parts;
      for (const ConcatPart& part : plan.parts) {
        if (!part.audio_path) {
          throw ValidationError("utterance '" + part.utt_id + "' has no audio to render");
        }
        parts.push_back(*cache.Get(ResolveAudioPath(part.source == 'a' ? o.a : o.b,
                                                     *part.audio_path).string()));
      }
      const AudioBuffer audio = RenderConcat(parts, plan.gap_s);
      const std::string rel = "audio/" + FileStem(plan.id) + ".wav";
      WriteWav(audio, ctx.out_dir / rel);
      Utterance& u = result.mixed.utterances[k];
      u.audio_path = rel;
      u.sample_rate = audio.sample_rate;
      u.duration_s = audio.duration_s();
    });
  }
  WriteManifest(result.mixed, ctx.out_dir / "sentence_mixed.jsonl");
  WriteConcatPlans(result.plans, ctx.out_dir / "concat_plans.jsonl");
  *ctx.out << "sentence-mixed " << result.mixed.utterances.size() << " outputs\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// stats

struct StatsOptions {
  std::vector<std::string> manifests;
  std::vector<std::string> names;
  std::string pair;
  std::string lexicon;
  int k = 2;
  std::string format = "text";
};

std::pair<LangTag, LangTag> ParsePair(const std::string& s) {
  const auto comma = s.find_first_of(",-");
  if (comma == std::string::npos) throw ValidationError("--pair must look like EN,ZH");
  return {LangTagFromString(s.substr(0, comma)), LangTagFromString(s.substr(comma + 1))};
}

int CmdStats(Context& ctx, const StatsOptions& o) {
  if (o.k < 2) throw ValidationError("--k must be >= 2");
  if (!o.names.empty() && o.names.size() != o.manifests.size()) {
    throw ValidationError("--name must be given once per manifest");
  }
  std::optional<std::pair<LangTag, LangTag>> pair;
  if (!o.pair.empty()) pair = ParsePair(o.pair);
  Lexicon lexicon;
  if (!o.lexicon.empty()) lexicon = ReadLexicon(o.lexicon);

  ordered_json rows = ordered_json::array();
  std::ostringstream table;
  table << "# CMI = 100*(N - max_lang)/N per utterance; all indices averaged over utterances\n";
  char line[256];
  std::snprintf(line, sizeof(line), "%-28s %10s %8s %8s %8s\n", "dataset", "hours", "CMI",
                "I-Index", "M-Index");
  table << line;
  for (std::size_t d = 0; d < o.manifests.size(); ++d) {
    Manifest m = ReadManifest(o.manifests[d]);
    if (pair) {
      for (Utterance& u : m.utterances) {
        if (u.tokens.empty()) u.tokens = TagTokens(u.text, *pair, lexicon.empty() ? nullptr : &lexicon);
      }
    }
    const CsStats s = CorpusStats(m, o.k);
    const std::string name =
        o.names.empty() ? fs::path(o.manifests[d]).stem().string() : o.names[d];
    std::snprintf(line, sizeof(line), "%-28s %10.2f %8.2f %8.2f %8.2f\n", name.c_str(), s.hours,
                  s.cmi, s.i_index, s.m_index);
    table << line;
    ordered_json row;
    row["dataset"] = name;
    row["utterances"] = s.utterances;
    row["hours"] = s.hours;
    row["cmi"] = s.cmi;
    row["i_index"] = s.i_index;
    row["m_index"] = s.m_index;
    ordered_json fractions = ordered_json::object();
    for (const auto& [lang, f] : s.lang_fractions) fractions[std::string(ToString(lang))] = f;
    row["lang_fractions"] = std::move(fractions);
    rows.push_back(std::move(row));
  }
  ordered_json doc;
  doc["cmi_variant"] = "100*(N-max_lang)/N";
  doc["k"] = o.k;
  doc["datasets"] = rows;
  WriteText(ctx.out_dir / "stats.txt", table.str());
  WriteText(ctx.out_dir / "stats.json", doc.dump(2) + "\n");
  if (o.format == "json") {
    *ctx.out << doc.dump(2) << "\n";
  } else if (o.format == "text") {
    *ctx.out << table.str();
  } else {
    throw ValidationError("--format must be 'text' or 'json'");
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// score

struct ScoreOptions {
  std::string ref;
  std::string hyp;
  std::string metric = "wer";
  bool keep_punct = false;
  bool keep_digits = false;
  bool no_lowercase = false;
  bool trace = false;
};

int CmdScore(Context& ctx, const ScoreOptions& o) {
  const Metric metric = MetricFromString(o.metric);
  NormPolicy policy;
  policy.strip_punct = !o.keep_punct;
  policy.strip_digits = !o.keep_digits;
  policy.lowercase_latin = !o.no_lowercase;
  const Manifest ref = ReadManifest(o.ref);
  const Hypotheses hyps = ReadHypotheses(o.hyp);
  const CorpusScore score = ScoreCorpus(ref, hyps, metric, policy, o.trace, ctx.global.workers);

  std::ostringstream records;
  for (const UtteranceScore& s : score.utterances) {
    records << FormatUtteranceScoreLine(s, o.trace) << "\n";
  }
  const std::string table = FormatScoreTable(score, policy);
  WriteText(ctx.out_dir / "score.jsonl", records.str());
  WriteText(ctx.out_dir / "score.txt", table);
  for (const std::string& id : score.missing_hyps) ctx.log->warn("missing hypothesis for {}", id);
  for (const std::string& id : score.empty_refs) ctx.log->warn("empty reference for {}", id);
  *ctx.out << table;
  return kExitOk;
}

// ---------------------------------------------------------------------------
// augment

struct AugmentOptions {
  std::string manifest;
  std::string noise;
  double noise_prob = 0.20;
  double speed_prob = 0.20;
  double snr_min = 10.0;
  double snr_max = 30.0;
  std::vector<double> speed_factors{0.9, 1.1};
};

std::vector<std::string> ReadNoiseList(const std::string& path) {
  std::vector<std::string> out;
  if (path.empty()) return out;
  if (fs::path(path).extension() == ".jsonl") {
    for (const Utterance& u : ReadManifest(path).utterances) {
      if (u.audio_path) out.push_back(ResolveAudioPath(path, *u.audio_path).string());
    }
    return out;
  }
  std::ifstream in(path);
  if (!in) throw IoError("cannot open noise list " + path);
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    out.push_back(ResolveAudioPath(path, line).string());
  }
  return out;
}

int CmdAugment(Context& ctx, const AugmentOptions& o) {
  AugmentConfig cfg;
  cfg.noise_prob = o.noise_prob;
  cfg.speed_prob = o.speed_prob;
  cfg.snr_db_min = o.snr_min;
  cfg.snr_db_max = o.snr_max;
  cfg.speed_factors = o.speed_factors;
  cfg.seed = ctx.global.seed;
  cfg.Validate();

  const Manifest in = ReadManifest(o.manifest);
  const std::vector<std::string> noises = ReadNoiseList(o.noise);
  if (cfg.noise_prob > 0.0 && noises.empty()) {
    throw ValidationError("--noise-prob > 0 needs a non-empty --noise list");
  }
  AudioCache cache(64);
  const NoiseLoader load_noise = [&](std::size_t i) { return *cache.Get(noises[i]); };

  Manifest out = in;
  EnsureDir(ctx.out_dir / "augmented");
  std::vector<std::string> report(in.utterances.size());
  ParallelFor(in.utterances.size(), ctx.global.workers, [&](std::size_t i) {
    Utterance& u = out.utterances[i];
    ordered_json rec;
    rec["utt_id"] = u.id;
    if (!u.audio_path) {
      rec["skipped"] = "no audio";
      report[i] = rec.dump();
      return;
    }
    const fs::path src_path = ResolveAudioPath(o.manifest, *u.audio_path);
    const AudioBuffer audio = ReadWav(src_path);
    AugmentInfo info;
    const AudioBuffer aug = Augment(audio, u.id, noises.size(), load_noise, cfg, &info);
    if (!info.changed()) {
      // Unchanged utterances keep their record; relative audio is copied so
      // the output manifest resolves from the output directory.
      const fs::path rel(*u.audio_path);
      if (rel.is_relative() && !rel.lexically_normal().string().starts_with("..")) {
        const fs::path dest = ctx.out_dir / rel;
        EnsureDir(dest.parent_path());
        fs::copy_file(src_path, dest, fs::copy_options::overwrite_existing);
      }
      rec["augmented"] = false;
    } else {
      const std::string rel = "augmented/" + FileStem(u.id) + ".wav";
      WriteWav(aug, ctx.out_dir / rel);
      u.audio_path = rel;
      u.duration_s = aug.duration_s();
      rec["augmented"] = true;
      if (info.speed_factor) rec["speed_factor"] = *info.speed_factor;
      if (info.snr_db) {
        rec["snr_db"] = *info.snr_db;
        rec["noise"] = noises[*info.noise_index];
        rec["noise_offset"] = info.noise.noise_offset;
        rec["noise_gain"] = info.noise.noise_gain;
        rec["rescale"] = info.noise.output_rescale;
      }
    }
    report[i] = rec.dump();
  });
  WriteManifest(out, ctx.out_dir / "augmented.jsonl");
  std::string lines;
  for (const std::string& r : report) lines += r + "\n";
  WriteText(ctx.out_dir / "augment_report.jsonl", lines);
  *ctx.out << "augmented " << out.utterances.size() << " utterances\n";
  return kExitOk;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"csmix: phrase-mixed code-switching corpus generation and scoring", "csmix"};
  app.set_version_flag("--version", std::string(CSMIX_VERSION));
  app.require_subcommand(1);

  Context ctx;
  ctx.out = &out;
  app.add_option("--seed", ctx.global.seed, "Seed for every random choice")->capture_default_str();
  app.add_option("--workers", ctx.global.workers, "Worker threads")
      ->check(CLI::Range(1, 1024))
      ->capture_default_str();
  app.add_option("--out", ctx.global.out, "Output directory")->capture_default_str();
  app.add_option("--log-level", ctx.global.log_level, "trace|debug|info|warn|error|off")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "critical", "off"}))
      ->capture_default_str();

  ValidateOptions validate;
  auto* validate_cmd = app.add_subcommand("validate", "Check a manifest");
  validate_cmd->add_option("--manifest", validate.manifest)->required();
  validate_cmd->add_flag("--check-audio", validate.check_audio,
                         "Also check that audio exists and matches sample rate and duration");

  MixTextOptions mix;
  auto* mix_cmd = app.add_subcommand("mix-text", "Generate phrase-mixed transcripts and plans");
  mix_cmd->add_option("--manifest", mix.manifest, "Source-language manifest")->required();
  mix_cmd->add_option("--tgt-text", mix.tgt_text, "Target-language translations, one per line")
      ->required();
  mix_cmd->add_option("--align", mix.align, "Word alignment, 'i-j' pairs per line")->required();
  mix_cmd->add_option("--tgt-lang", mix.tgt_lang)->capture_default_str();
  mix_cmd->add_option("--ratio-min", mix.ratio_min)->capture_default_str();
  mix_cmd->add_option("--ratio-max", mix.ratio_max)->capture_default_str();
  mix_cmd->add_option("--min-len", mix.min_len, "Shorter sentences are skipped")->capture_default_str();
  mix_cmd->add_option("--max-phrase-len", mix.max_phrase_len)->capture_default_str();
  mix_cmd->add_option("--keep-list", mix.keep_list, "Words that are never replaced");

  SpliceOptions splice;
  auto* splice_cmd = app.add_subcommand("splice", "Render phrase-mixed audio from plans");
  splice_cmd->add_option("--plans", splice.plans)->required();
  splice_cmd->add_option("--manifest", splice.manifest, "Source manifest the plans refer to")
      ->required();
  splice_cmd->add_option("--ctm", splice.ctm, "Word timings of the source audio")->required();
  splice_cmd->add_option("--donor", splice.donors,
                         "Donor directory with manifest.jsonl and words.ctm (repeatable)")
      ->required();
  splice_cmd->add_option("--tgt-lang", splice.tgt_lang)->capture_default_str();
  splice_cmd->add_option("--norm", splice.norm, "peak|off")->capture_default_str();
  splice_cmd->add_option("--crossfade-ms", splice.crossfade_ms)->capture_default_str();
  splice_cmd->add_option("--silence-ms", splice.silence_ms)->capture_default_str();
  splice_cmd->add_option("--target-peak", splice.target_peak, "median|<value in (0,1]>")
      ->capture_default_str();
  splice_cmd->add_option("--max-ngram", splice.max_ngram)->capture_default_str();

  SentenceMixOptions smix;
  auto* smix_cmd = app.add_subcommand("sentence-mix", "Concatenate whole sentences of two corpora");
  smix_cmd->add_option("--a", smix.a)->required();
  smix_cmd->add_option("--b", smix.b)->required();
  smix_cmd->add_option("--per-output", smix.per_output)->capture_default_str();
  smix_cmd->add_option("--gap-s", smix.gap_s)->capture_default_str();
  smix_cmd->add_flag("--render", smix.render, "Also write the concatenated audio");

  StatsOptions stats;
  auto* stats_cmd = app.add_subcommand("stats", "Code-switching statistics per dataset");
  stats_cmd->add_option("manifests", stats.manifests)->required();
  stats_cmd->add_option("--name", stats.names, "Dataset label per manifest");
  stats_cmd->add_option("--pair", stats.pair, "Language pair used to tag untagged text, e.g. EN,ZH");
  stats_cmd->add_option("--lexicon", stats.lexicon, "word LANG lines for Latin-script tagging");
  stats_cmd->add_option("--k", stats.k, "Languages in the pair")->capture_default_str();
  stats_cmd->add_option("--format", stats.format, "text|json")->capture_default_str();

  ScoreOptions score;
  auto* score_cmd = app.add_subcommand("score", "WER / CER / MER against a reference manifest");
  score_cmd->add_option("--ref", score.ref)->required();
  score_cmd->add_option("--hyp", score.hyp, "utt_id<TAB>text lines")->required();
  score_cmd->add_option("--metric", score.metric, "wer|cer|mer")->capture_default_str();
  score_cmd->add_flag("--keep-punct", score.keep_punct);
  score_cmd->add_flag("--keep-digits", score.keep_digits);
  score_cmd->add_flag("--no-lowercase", score.no_lowercase);
  score_cmd->add_flag("--trace", score.trace, "Include the alignment trace per utterance");

  AugmentOptions augment;
  auto* augment_cmd = app.add_subcommand("augment", "Speed and noise augmentation");
  augment_cmd->add_option("--manifest", augment.manifest)->required();
  augment_cmd->add_option("--noise", augment.noise, "Noise manifest (.jsonl) or list of WAV paths");
  augment_cmd->add_option("--noise-prob", augment.noise_prob)->capture_default_str();
  augment_cmd->add_option("--speed-prob", augment.speed_prob)->capture_default_str();
  augment_cmd->add_option("--snr-min", augment.snr_min)->capture_default_str();
  augment_cmd->add_option("--snr-max", augment.snr_max)->capture_default_str();
  augment_cmd->add_option("--speed-factors", augment.speed_factors)
      ->delimiter(',')
      ->capture_default_str();

  std::vector<std::string> argv_tail(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(argv_tail.begin(), argv_tail.end());
  try {
    app.parse(argv_tail);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << CSMIX_VERSION << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  ctx.log = std::make_shared<spdlog::logger>("csmix", sink);
  ctx.log->set_pattern("[%l] %v");
  ctx.log->set_level(spdlog::level::from_str(ctx.global.log_level));
  ctx.out_dir = ctx.global.out;

  CLI::App* sub = app.get_subcommands().front();
  try {
    EnsureDir(ctx.out_dir);
    WriteRunConfig(ctx, app, *sub, args);
    if (sub == validate_cmd) return CmdValidate(ctx, validate);
    if (sub == mix_cmd) return CmdMixText(ctx, mix);
    if (sub == splice_cmd) return CmdSplice(ctx, splice);
    if (sub == smix_cmd) return CmdSentenceMix(ctx, smix);
    if (sub == stats_cmd) return CmdStats(ctx, stats);
    if (sub == score_cmd) return CmdScore(ctx, score);
    if (sub == augment_cmd) return CmdAugment(ctx, augment);
  } catch (const Error& e) {
    ctx.log->error("{}", e.what());
    return e.kind() == ErrorKind::kIo ? kExitIo : kExitValidation;
  } catch (const fs::filesystem_error& e) {
    ctx.log->error("{}", e.what());
    return kExitIo;
  }
  return kExitValidation;
}

}  // namespace csmix::cli
