// core/src/cs_metrics.cc

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

#include "csmix/cs_metrics.hpp"

#include <algorithm>
#include <array>

namespace csmix {

namespace {

constexpr std::size_t kNumLangs = 5;

struct Counts {
  std::array<std::size_t, kNumLangs> per_lang{};
  std::size_t total = 0;
};

Counts CountLanguages(std::span<const Token> tokens) {
  Counts c;
  for (const Token& t : tokens) {
    if (t.lang == LangTag::kNeutral) continue;
    ++c.per_lang[static_cast<std::size_t>(t.lang)];
    ++c.total;
  }
  return c;
}

}  // namespace

double Cmi(std::span<const Token> tokens) {
  const Counts c = CountLanguages(tokens);
  if (c.total == 0) return 0.0;
  const std::size_t dominant = *std::max_element(c.per_lang.begin(), c.per_lang.end());
  return 100.0 * static_cast<double>(c.total - dominant) / static_cast<double>(c.total);
}

double IIndex(std::span<const Token> tokens) {
  std::size_t n = 0, switches = 0;
  const Token* prev = nullptr;
  for (const Token& t : tokens) {
    if (t.lang == LangTag::kNeutral) continue;
    if (prev != nullptr && prev->lang != t.lang) ++switches;
    prev = &t;
    ++n;
  }
  if (n < 2) return 0.0;
  return 100.0 * static_cast<double>(switches) / static_cast<double>(n - 1);
}

double MIndex(std::span<const Token> tokens, int k) {
  const Counts c = CountLanguages(tokens);
  if (c.total == 0) return 0.0;
  int present = 0;
  double sum_sq = 0.0;
  for (std::size_t count : c.per_lang) {
    if (count == 0) continue;
    ++present;
    const double p = static_cast<double>(count) / static_cast<double>(c.total);
    sum_sq += p * p;
  }
  if (present < 2) return 0.0;
  const int langs = std::max(k, present);
  return 100.0 * (1.0 - sum_sq) / (static_cast<double>(langs - 1) * sum_sq);
}

CsStats CorpusStats(const Manifest& m, int k) {
  CsStats s;
  s.utterances = m.utterances.size();
  s.hours = m.Hours();
  std::array<std::size_t, kNumLangs> pooled{};
  std::size_t pooled_total = 0;
  for (const Utterance& u : m.utterances) {
    s.cmi += Cmi(u);
    s.i_index += IIndex(u);
    s.m_index += MIndex(u, k);
    const Counts c = CountLanguages(u.tokens);
    for (std::size_t l = 0; l < kNumLangs; ++l) pooled[l] += c.per_lang[l];
    pooled_total += c.total;
  }
  if (s.utterances > 0) {
    const auto n = static_cast<double>(s.utterances);
    s.cmi /= n;
    s.i_index /= n;
    s.m_index /= n;
  }
  for (std::size_t l = 0; l < kNumLangs; ++l) {
    if (pooled[l] == 0) continue;
    s.lang_fractions[static_cast<LangTag>(l)] =
        static_cast<double>(pooled[l]) / static_cast<double>(pooled_total);
  }
  return s;
}

}  // namespace csmix
