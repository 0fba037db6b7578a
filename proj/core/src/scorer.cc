// core/src/scorer.cc

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

#include "csmix/scorer.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "csmix/error.hpp"
#include "csmix/parallel.hpp"
#include "csmix/unicode.hpp"
#include "json.hpp"

namespace csmix {

std::string_view ToString(Metric metric) {
  switch (metric) {
    case Metric::kWer: return "wer";
    case Metric::kCer: return "cer";
    case Metric::kMer: return "mer";
  }
  return "wer";
}

Metric MetricFromString(std::string_view name) {
  if (name == "wer" || name == "WER") return Metric::kWer;
  if (name == "cer" || name == "CER") return Metric::kCer;
  if (name == "mer" || name == "MER") return Metric::kMer;
  throw ValidationError("unknown metric '" + std::string(name) + "' (expected wer, cer or mer)");
}

std::string Describe(const NormPolicy& p) {
  std::string out = "norm: NFC";
  if (p.lowercase_latin) out += ", lowercase";
  if (p.strip_punct) out += ", strip punctuation";
  if (p.strip_digits) out += ", strip digits";
  if (p.collapse_whitespace) out += ", collapse whitespace";
  return out;
}

std::string NormalizeText(std::string_view text, const NormPolicy& policy) {
  std::string s = unicode::Nfc(text);
  if (policy.lowercase_latin) s = unicode::ToLower(s);

  std::u32string cps;
  for (char32_t cp : unicode::Decode(s)) {
    if (policy.strip_punct && unicode::IsPunctuation(cp)) {
      if (cp == U'\'' || cp == U'’') continue;
      cps.push_back(U' ');
    } else if (policy.strip_digits && unicode::IsDigit(cp)) {
      cps.push_back(U' ');
    } else if (unicode::IsSpace(cp)) {
      cps.push_back(U' ');
    } else {
      cps.push_back(cp);
    }
  }

  if (policy.collapse_whitespace) {
    std::u32string collapsed;
    for (char32_t cp : cps) {
      if (cp == U' ' && (collapsed.empty() || collapsed.back() == U' ')) continue;
      collapsed.push_back(cp);
    }
    if (!collapsed.empty() && collapsed.back() == U' ') collapsed.pop_back();
    cps = std::move(collapsed);
  }
  return unicode::Nfc(unicode::Encode(cps));
}

std::vector<std::string> MixedTokenize(std::string_view text, Metric metric) {
  std::vector<std::string> units;
  switch (metric) {
    case Metric::kWer:
      return unicode::SplitWhitespace(text);
    case Metric::kCer:
      for (char32_t cp : unicode::Decode(text)) {
        if (unicode::IsSpace(cp)) continue;
        units.emplace_back();
        unicode::AppendUtf8(cp, units.back());
      }
      return units;
    case Metric::kMer: {
      std::string run;
      auto flush = [&] {
        if (!run.empty()) units.push_back(std::move(run));
        run.clear();
      };
      for (char32_t cp : unicode::Decode(text)) {
        if (unicode::IsSpace(cp)) {
          flush();
        } else if (unicode::IsHan(cp)) {
          flush();
          units.emplace_back();
          unicode::AppendUtf8(cp, units.back());
        } else {
          unicode::AppendUtf8(cp, run);
        }
      }
      flush();
      return units;
    }
  }
  return units;
}

EditCounts& EditCounts::operator+=(const EditCounts& o) {
  correct += o.correct;
  substitutions += o.substitutions;
  deletions += o.deletions;
  insertions += o.insertions;
  return *this;
}

EditAlignment EditAlign(const std::vector<std::string>& ref, const std::vector<std::string>& hyp) {
  const std::size_t m = ref.size(), n = hyp.size();
  const std::size_t stride = n + 1;
  std::vector<std::uint32_t> cost((m + 1) * stride);
  auto at = [&](std::size_t i, std::size_t j) -> std::uint32_t& { return cost[i * stride + j]; };

  for (std::size_t j = 0; j <= n; ++j) at(0, j) = static_cast<std::uint32_t>(j);
  for (std::size_t i = 1; i <= m; ++i) {
    at(i, 0) = static_cast<std::uint32_t>(i);
    for (std::size_t j = 1; j <= n; ++j) {
      const std::uint32_t diag = at(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      at(i, j) = std::min({diag, at(i - 1, j) + 1, at(i, j - 1) + 1});
    }
  }

  EditAlignment out;
  std::size_t i = m, j = n;
  while (i > 0 || j > 0) {
    const std::uint32_t here = at(i, j);
    if (i > 0 && j > 0 && ref[i - 1] == hyp[j - 1] && at(i - 1, j - 1) == here) {
      out.trace.push_back({EditOp::kMatch, static_cast<std::ptrdiff_t>(--i),
                           static_cast<std::ptrdiff_t>(--j)});
      ++out.counts.correct;
    } else if (i > 0 && j > 0 && ref[i - 1] != hyp[j - 1] && at(i - 1, j - 1) + 1 == here) {
      out.trace.push_back({EditOp::kSub, static_cast<std::ptrdiff_t>(--i),
                           static_cast<std::ptrdiff_t>(--j)});
      ++out.counts.substitutions;
    } else if (i > 0 && at(i - 1, j) + 1 == here) {
      out.trace.push_back({EditOp::kDel, static_cast<std::ptrdiff_t>(--i), -1});
      ++out.counts.deletions;
    } else {
      out.trace.push_back({EditOp::kIns, -1, static_cast<std::ptrdiff_t>(--j)});
      ++out.counts.insertions;
    }
  }
  std::reverse(out.trace.begin(), out.trace.end());
  return out;
}

void ScoreReport::Finalize() {
  empty_ref = n_ref == 0;
  const double denom = static_cast<double>(std::max<std::size_t>(1, n_ref));
  rate = 100.0 * static_cast<double>(counts.errors()) / denom;
  corr_rate = 100.0 * static_cast<double>(counts.correct) / denom;
  sub_rate = 100.0 * static_cast<double>(counts.substitutions) / denom;
  del_rate = 100.0 * static_cast<double>(counts.deletions) / denom;
  ins_rate = 100.0 * static_cast<double>(counts.insertions) / denom;
}

namespace {

UtteranceScore ScoreUnits(std::string utt_id, std::vector<std::string> ref_units,
                          std::vector<std::string> hyp_units, Metric metric, bool keep_trace) {
  UtteranceScore s;
  s.utt_id = std::move(utt_id);
  EditAlignment a = EditAlign(ref_units, hyp_units);
  s.report.metric = metric;
  s.report.n_ref = ref_units.size();
  s.report.counts = a.counts;
  s.report.Finalize();
  if (keep_trace) {
    s.trace = std::move(a.trace);
    s.ref_units = std::move(ref_units);
    s.hyp_units = std::move(hyp_units);
  }
  return s;
}

}  // namespace

ScoreReport ScorePair(std::string_view ref, std::string_view hyp, Metric metric,
                      const NormPolicy& policy, EditAlignment* alignment) {
  const auto ref_units = MixedTokenize(NormalizeText(ref, policy), metric);
  const auto hyp_units = MixedTokenize(NormalizeText(hyp, policy), metric);
  EditAlignment a = EditAlign(ref_units, hyp_units);
  ScoreReport r;
  r.metric = metric;
  r.n_ref = ref_units.size();
  r.counts = a.counts;
  r.Finalize();
  if (alignment != nullptr) *alignment = std::move(a);
  return r;
}

Hypotheses ReadHypotheses(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open hypothesis file " + path.string());
  Hypotheses hyps;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    std::string id = line.substr(0, tab);
    std::string text = tab == std::string::npos ? std::string() : line.substr(tab + 1);
    if (id.empty()) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": empty utterance id");
    }
    if (!seen.insert(id).second) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                            ": duplicate hypothesis for '" + id + "'");
    }
    hyps.emplace_back(std::move(id), std::move(text));
  }
  return hyps;
}

CorpusScore ScoreCorpus(const Manifest& ref, const Hypotheses& hyps, Metric metric,
                        const NormPolicy& policy, bool keep_trace, int workers) {
  std::unordered_map<std::string_view, std::size_t> ref_index;
  for (std::size_t i = 0; i < ref.utterances.size(); ++i) ref_index.emplace(ref.utterances[i].id, i);
  std::vector<const std::string*> hyp_for(ref.utterances.size(), nullptr);
  for (const auto& [id, text] : hyps) {
    auto it = ref_index.find(id);
    if (it == ref_index.end()) {
      throw ValidationError("hypothesis id '" + id + "' not in reference manifest");
    }
    hyp_for[it->second] = &text;
  }

  CorpusScore out;
  out.utterances.resize(ref.utterances.size());
  ParallelFor(ref.utterances.size(), workers, [&](std::size_t i) {
    const Utterance& u = ref.utterances[i];
    const std::string hyp = hyp_for[i] != nullptr ? *hyp_for[i] : std::string();
    out.utterances[i] =
        ScoreUnits(u.id, MixedTokenize(NormalizeText(u.text, policy), metric),
                   MixedTokenize(NormalizeText(hyp, policy), metric), metric, keep_trace);
    out.utterances[i].missing_hyp = hyp_for[i] == nullptr;
  });

  out.total.metric = metric;
  for (const UtteranceScore& s : out.utterances) {
    out.total.n_ref += s.report.n_ref;
    out.total.counts += s.report.counts;
    if (s.missing_hyp) out.missing_hyps.push_back(s.utt_id);
    if (s.report.n_ref == 0) out.empty_refs.push_back(s.utt_id);
  }
  out.total.Finalize();
  return out;
}

std::string FormatScoreTable(const CorpusScore& score, const NormPolicy& policy) {
  const ScoreReport& t = score.total;
  std::string metric(ToString(t.metric));
  for (char& c : metric) c = static_cast<char>(c - 'a' + 'A');
  std::ostringstream os;
  os << "# " << Describe(policy) << "\n";
  char line[256];
  std::snprintf(line, sizeof(line), "%-6s %8s %8s %8s %8s %8s %8s %8s %8s %8s %8s\n",
                "metric", "N", "C", "S", "D", "I", "rate", "corr", "sub", "del", "ins");
  os << line;
  std::snprintf(line, sizeof(line), "%-6s %8zu %8zu %8zu %8zu %8zu %8.2f %8.2f %8.2f %8.2f %8.2f\n",
                metric.c_str(), t.n_ref, t.counts.correct, t.counts.substitutions,
                t.counts.deletions, t.counts.insertions, t.rate, t.corr_rate, t.sub_rate,
                t.del_rate, t.ins_rate);
  os << line;
  os << "utterances: " << score.utterances.size()
     << "  missing hypotheses: " << score.missing_hyps.size()
     << "  empty references: " << score.empty_refs.size() << "\n";
  for (const std::string& id : score.missing_hyps) os << "WARNING missing hypothesis: " << id << "\n";
  for (const std::string& id : score.empty_refs) os << "WARNING empty reference: " << id << "\n";
  return os.str();
}

std::string FormatUtteranceScoreLine(const UtteranceScore& s, bool with_trace) {
  nlohmann::ordered_json j;
  j["utt_id"] = s.utt_id;
  j["n_ref"] = s.report.n_ref;
  j["C"] = s.report.counts.correct;
  j["S"] = s.report.counts.substitutions;
  j["D"] = s.report.counts.deletions;
  j["I"] = s.report.counts.insertions;
  j["rate"] = s.report.rate;
  if (s.missing_hyp) j["missing_hyp"] = true;
  if (s.report.empty_ref) j["empty_ref"] = true;
  if (with_trace) {
    nlohmann::ordered_json trace = nlohmann::ordered_json::array();
    for (const AlignedPair& p : s.trace) {
      trace.push_back({std::string(1, static_cast<char>(p.op)),
                       p.ref >= 0 ? s.ref_units[static_cast<std::size_t>(p.ref)] : std::string(),
                       p.hyp >= 0 ? s.hyp_units[static_cast<std::size_t>(p.hyp)] : std::string()});
    }
    j["trace"] = std::move(trace);
  }
  return j.dump();
}

}  // namespace csmix
