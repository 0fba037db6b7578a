// csmix/cs_metrics.hpp

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

#include <map>
#include <span>

#include "csmix/corpus.hpp"

namespace csmix {

// All indices ignore NEUTRAL tokens and are reported on a 0-100 scale.

/// Code-mixing index, switch-free utterance form: 100 * (N - t_max) / N
/// with N language tokens and t_max tokens in the dominant language.
double Cmi(std::span<const Token> tokens);

/// Share of adjacent language-token boundaries where the language changes.
double IIndex(std::span<const Token> tokens);

/// Multilingual balance: 100 * (1 - sum p^2) / ((k - 1) * sum p^2). `k` is
/// raised to the number of languages actually present if that is larger.
double MIndex(std::span<const Token> tokens, int k = 2);

inline double Cmi(const Utterance& u) { return Cmi(u.tokens); }
inline double IIndex(const Utterance& u) { return IIndex(u.tokens); }
inline double MIndex(const Utterance& u, int k = 2) { return MIndex(u.tokens, k); }

struct CsStats {
  std::size_t utterances = 0;
  double hours = 0.0;
  double cmi = 0.0;
  double i_index = 0.0;
  double m_index = 0.0;
  std::map<LangTag, double> lang_fractions;  // pooled over language tokens
};

/// Per-utterance indices averaged with equal weight; hours summed.
CsStats CorpusStats(const Manifest& m, int k = 2);

}  // namespace csmix
