// core/src/text_mixer.cc

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

#include "csmix/text_mixer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "csmix/error.hpp"
#include "csmix/parallel.hpp"
#include "csmix/rng.hpp"
#include "csmix/unicode.hpp"
#include "json.hpp"

namespace csmix {

using nlohmann::json;
using nlohmann::ordered_json;

void MixConfig::Validate() const {
  if (!(ratio_min > 0.0 && ratio_min <= ratio_max && ratio_max < 1.0)) {
    throw ValidationError("mix ratios must satisfy 0 < ratio_min <= ratio_max < 1 (got " +
                          std::to_string(ratio_min) + ", " + std::to_string(ratio_max) + ")");
  }
  if (max_phrase_len == 0) throw ValidationError("max_phrase_len must be > 0");
}

PlanResult PlanMix(const Utterance& src, const std::vector<std::string>& tgt_words,
                   const std::vector<PhrasePair>& pairs, const MixConfig& cfg) {
  const std::size_t len = src.tokens.size();
  if (len < cfg.min_sentence_len) return MixSkip{src.id, "too short"};

  std::vector<const PhrasePair*> candidates;
  for (const PhrasePair& p : pairs) {
    if (p.src.last >= len || p.tgt.last >= tgt_words.size()) continue;
    if (p.src.size() > cfg.max_phrase_len || p.tgt.size() > cfg.max_phrase_len) continue;
    bool has_language = false;
    bool kept = false;
    for (std::size_t i = p.src.first; i <= p.src.last; ++i) {
      has_language = has_language || src.tokens[i].lang != LangTag::kNeutral;
      if (!cfg.keep_words.empty() &&
          cfg.keep_words.contains(unicode::WordKey(src.tokens[i].surface))) {
        kept = true;
      }
    }
    if (has_language && !kept) candidates.push_back(&p);
  }
  if (candidates.empty()) return MixSkip{src.id, "no candidates"};

  Rng rng = Rng(cfg.seed).With(src.id).With("plan");
  const double ratio = rng.Uniform(cfg.ratio_min, cfg.ratio_max);
  const std::size_t budget = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(ratio * static_cast<double>(len))));
  rng.Shuffle(std::span(candidates));

  // taken[i] marks replaced source tokens.
  std::vector<bool> taken(len, false);
  auto blocked = [&](const Span& s) {
    const std::size_t lo = s.first > 0 ? s.first - 1 : 0;
    const std::size_t hi = std::min(len - 1, s.last + 1);
    for (std::size_t i = lo; i <= hi; ++i) {
      if (taken[i]) return true;
    }
    return false;
  };

  MixPlan plan;
  plan.utt_id = src.id;
  plan.seed = cfg.seed;
  std::size_t used = 0;
  for (const PhrasePair* p : candidates) {
    if (used + p->src.size() > budget || blocked(p->src)) continue;
    for (std::size_t i = p->src.first; i <= p->src.last; ++i) taken[i] = true;
    used += p->src.size();
    plan.replacements.push_back(
        {p->src, p->tgt,
         std::vector<std::string>(tgt_words.begin() + static_cast<std::ptrdiff_t>(p->tgt.first),
                                  tgt_words.begin() + static_cast<std::ptrdiff_t>(p->tgt.last) + 1)});
    if (used == budget) break;
  }
  if (used == 0) return MixSkip{src.id, "no placement"};

  plan.replaced_fraction = static_cast<double>(used) / static_cast<double>(len);
  if (plan.replaced_fraction < cfg.ratio_min - 1.0 / static_cast<double>(len)) {
    return MixSkip{src.id, "below ratio_min"};
  }
  std::sort(plan.replacements.begin(), plan.replacements.end(),
            [](const Replacement& a, const Replacement& b) { return a.src < b.src; });
  return plan;
}

Utterance ApplyMix(const Utterance& src, const MixPlan& plan, LangTag tgt_lang) {
  Utterance out;
  out.id = src.id;
  out.sample_rate = src.sample_rate;
  out.extra = src.extra;

  std::size_t next = 0;
  for (const Replacement& r : plan.replacements) {
    if (r.src.first > r.src.last || r.src.last >= src.tokens.size() || r.src.first < next) {
      throw ValidationError("plan for '" + src.id + "': span [" +
                            std::to_string(r.src.first) + "," + std::to_string(r.src.last) +
                            "] out of range or out of order");
    }
    out.tokens.insert(out.tokens.end(),
                      src.tokens.begin() + static_cast<std::ptrdiff_t>(next),
                      src.tokens.begin() + static_cast<std::ptrdiff_t>(r.src.first));
    for (const std::string& w : r.words) out.tokens.push_back({w, tgt_lang});
    next = r.src.last + 1;
  }
  out.tokens.insert(out.tokens.end(), src.tokens.begin() + static_cast<std::ptrdiff_t>(next),
                    src.tokens.end());
  out.text = JoinSurfaces(out.tokens);
  return out;
}

std::optional<std::string> CheckPlan(const MixPlan& plan, std::size_t src_len,
                                     const SentenceAlignment& alignment,
                                     const MixConfig& cfg) {
  if (plan.replacements.empty()) return "no replacements";
  if (src_len == 0) return "empty source";
  std::size_t used = 0;
  for (std::size_t k = 0; k < plan.replacements.size(); ++k) {
    const Replacement& r = plan.replacements[k];
    if (r.src.first > r.src.last || r.src.last >= src_len) return "source span out of range";
    if (r.tgt.first > r.tgt.last || r.tgt.last >= alignment.tgt_len) {
      return "target span out of range";
    }
    if (r.words.size() != r.tgt.size()) return "word count differs from target span";
    if (r.src.size() > cfg.max_phrase_len || r.tgt.size() > cfg.max_phrase_len) {
      return "span longer than max_phrase_len";
    }
    if (!IsConsistent(alignment, {r.src, r.tgt})) return "pair inconsistent with alignment";
    if (k > 0) {
      const Span& prev = plan.replacements[k - 1].src;
      if (r.src.first <= prev.last) return "overlapping or unordered spans";
      if (r.src.first == prev.last + 1) return "adjacent spans";
    }
    used += r.src.size();
  }
  const double len = static_cast<double>(src_len);
  const double fraction = static_cast<double>(used) / len;
  if (std::abs(fraction - plan.replaced_fraction) > 1e-12) {
    return "replaced_fraction does not match spans";
  }
  if (fraction < cfg.ratio_min - 1.0 / len - 1e-12 ||
      fraction > cfg.ratio_max + 1.0 / len + 1e-12) {
    return "replaced_fraction outside [ratio_min - 1/len, ratio_max + 1/len]";
  }
  return std::nullopt;
}

MixCorpusResult MixCorpus(const Manifest& src,
                          const std::vector<std::vector<std::string>>& tgt_sentences,
                          const std::vector<SentenceAlignment>& alignments,
                          LangTag tgt_lang, const MixConfig& cfg, int workers) {
  cfg.Validate();
  const std::size_t n = src.utterances.size();
  if (tgt_sentences.size() != n || alignments.size() != n) {
    throw ValidationError("input count mismatch: " + std::to_string(n) + " utterances, " +
                          std::to_string(tgt_sentences.size()) + " target sentences, " +
                          std::to_string(alignments.size()) + " alignments");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Utterance& u = src.utterances[i];
    if (alignments[i].src_len != u.tokens.size() ||
        alignments[i].tgt_len != tgt_sentences[i].size()) {
      throw ValidationError("sentence " + std::to_string(i + 1) + " ('" + u.id +
                            "'): alignment lengths (" + std::to_string(alignments[i].src_len) +
                            "," + std::to_string(alignments[i].tgt_len) +
                            ") do not match token counts (" + std::to_string(u.tokens.size()) +
                            "," + std::to_string(tgt_sentences[i].size()) + ")");
    }
  }

  std::vector<PlanResult> results(n);
  ParallelFor(n, workers, [&](std::size_t i) {
    const auto pairs = ExtractPhrasePairs(alignments[i], cfg.max_phrase_len);
    results[i] = PlanMix(src.utterances[i], tgt_sentences[i], pairs, cfg);
  });

  MixCorpusResult out;
  for (std::size_t i = 0; i < n; ++i) {
    if (auto* plan = std::get_if<MixPlan>(&results[i])) {
      out.mixed.utterances.push_back(ApplyMix(src.utterances[i], *plan, tgt_lang));
      out.plans.push_back(std::move(*plan));
    } else {
      out.skips.push_back(std::get<MixSkip>(std::move(results[i])));
    }
  }
  ValidateManifest(out.mixed);
  return out;
}

std::vector<std::vector<std::string>> ReadParallelText(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open parallel text " + path.string());
  std::vector<std::vector<std::string>> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    try {
      out.push_back(unicode::SplitWhitespace(unicode::Nfc(line)));
    } catch (const Error& e) {
      throw ValidationError(path.string() + ":" + std::to_string(out.size() + 1) + ": " +
                            e.what());
    }
  }
  return out;
}

std::string FormatPlanLine(const MixPlan& plan) {
  ordered_json record;
  record["utt_id"] = plan.utt_id;
  ordered_json reps = ordered_json::array();
  for (const Replacement& r : plan.replacements) {
    ordered_json entry;
    entry["src"] = {r.src.first, r.src.last};
    entry["tgt"] = {r.tgt.first, r.tgt.last};
    entry["words"] = r.words;
    reps.push_back(std::move(entry));
  }
  record["replacements"] = std::move(reps);
  record["replaced_fraction"] = plan.replaced_fraction;
  record["seed"] = plan.seed;
  return record.dump();
}

namespace {

Span ParseSpan(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_unsigned() ||
      !j[1].is_number_unsigned()) {
    throw ValidationError("span must be [first, last]");
  }
  Span s{j[0].get<std::size_t>(), j[1].get<std::size_t>()};
  if (s.first > s.last) throw ValidationError("span first > last");
  return s;
}

}  // namespace

MixPlan ParsePlanLine(std::string_view line, std::size_t line_no) {
  try {
    const json j = json::parse(line);
    MixPlan plan;
    plan.utt_id = j.at("utt_id").get<std::string>();
    for (const json& r : j.at("replacements")) {
      plan.replacements.push_back({ParseSpan(r.at("src")), ParseSpan(r.at("tgt")),
                                   r.at("words").get<std::vector<std::string>>()});
    }
    plan.replaced_fraction = j.at("replaced_fraction").get<double>();
    plan.seed = j.at("seed").get<std::uint64_t>();
    return plan;
  } catch (const json::exception& e) {
    throw ValidationError("plan line " + std::to_string(line_no) + ": " + e.what());
  } catch (const Error& e) {
    throw ValidationError("plan line " + std::to_string(line_no) + ": " + e.what());
  }
}

namespace {

template <typename T, typename Format>
void WriteLines(const std::vector<T>& items, const std::filesystem::path& path, Format format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  for (const T& item : items) out << format(item) << '\n';
  out.flush();
  if (!out) throw IoError("write error on " + path.string());
}

}  // namespace

void WritePlans(const std::vector<MixPlan>& plans, const std::filesystem::path& path) {
  WriteLines(plans, path, FormatPlanLine);
}

std::vector<MixPlan> ReadPlans(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open plans " + path.string());
  std::vector<MixPlan> plans;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    plans.push_back(ParsePlanLine(line, line_no));
  }
  return plans;
}

std::string FormatSkipLine(const MixSkip& skip) {
  ordered_json record;
  record["utt_id"] = skip.utt_id;
  record["reason"] = skip.reason;
  return record.dump();
}

void WriteSkips(const std::vector<MixSkip>& skips, const std::filesystem::path& path) {
  WriteLines(skips, path, FormatSkipLine);
}

namespace {

class ShuffledPool {
 public:
  ShuffledPool(std::size_t size, std::uint64_t seed, char side)
      : order_(size), seed_(seed), side_(side) {
    Refill();
  }

  std::size_t Draw() {
    if (pos_ == order_.size()) Refill();
    return order_[pos_++];
  }

 private:
  void Refill() {
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    Rng rng = Rng(seed_).With("sentence-mix").With(std::string(1, side_)).With(epoch_++);
    rng.Shuffle(std::span(order_));
    pos_ = 0;
  }

  std::vector<std::size_t> order_;
  std::uint64_t seed_;
  char side_;
  std::uint64_t epoch_ = 0;
  std::size_t pos_ = 0;
};

}  // namespace

SentenceMixResult SentenceMix(const Manifest& a, const Manifest& b, std::size_t per_output,
                              double gap_s, std::uint64_t seed) {
  if (per_output < 2) throw ValidationError("per_output must be >= 2");
  if (a.utterances.empty() || b.utterances.empty()) {
    throw ValidationError("sentence mixing needs two non-empty manifests");
  }
  if (!(gap_s >= 0.0)) throw ValidationError("gap_s must be >= 0");

  ShuffledPool pool_a(a.utterances.size(), seed, 'a');
  ShuffledPool pool_b(b.utterances.size(), seed, 'b');
  const std::size_t total = a.utterances.size() + b.utterances.size();
  const std::size_t outputs = (total + per_output - 1) / per_output;

  SentenceMixResult result;
  for (std::size_t k = 0; k < outputs; ++k) {
    char id_buf[32];
    std::snprintf(id_buf, sizeof(id_buf), "smix-%06zu", k);
    ConcatPlan plan;
    plan.id = id_buf;
    plan.gap_s = gap_s;
    Utterance out;
    out.id = plan.id;
    for (std::size_t p = 0; p < per_output; ++p) {
      const bool from_a = (k + p) % 2 == 0;
      const Utterance& u = from_a ? a.utterances[pool_a.Draw()] : b.utterances[pool_b.Draw()];
      if (p == 0) out.sample_rate = u.sample_rate;
      plan.parts.push_back({from_a ? 'a' : 'b', u.id, u.audio_path, u.duration_s});
      out.tokens.insert(out.tokens.end(), u.tokens.begin(), u.tokens.end());
      if (!out.text.empty() && !u.text.empty()) out.text += ' ';
      out.text += u.text;
      out.duration_s += u.duration_s;
    }
    out.duration_s += gap_s * static_cast<double>(per_output - 1);
    result.mixed.utterances.push_back(std::move(out));
    result.plans.push_back(std::move(plan));
  }
  ValidateManifest(result.mixed);
  return result;
}

std::string FormatConcatPlanLine(const ConcatPlan& plan) {
  ordered_json record;
  record["id"] = plan.id;
  ordered_json parts = ordered_json::array();
  for (const ConcatPart& p : plan.parts) {
    ordered_json entry;
    entry["source"] = std::string(1, p.source);
    entry["utt_id"] = p.utt_id;
    if (p.audio_path) entry["audio"] = *p.audio_path;
    entry["duration_s"] = p.duration_s;
    parts.push_back(std::move(entry));
  }
  record["parts"] = std::move(parts);
  record["gap_s"] = plan.gap_s;
  return record.dump();
}

void WriteConcatPlans(const std::vector<ConcatPlan>& plans, const std::filesystem::path& path) {
  WriteLines(plans, path, FormatConcatPlanLine);
}

}  // namespace csmix
