// csmix/unicode.hpp

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

#include <string>
#include <string_view>
#include <vector>

namespace csmix::unicode {

/// Decodes UTF-8. Throws ValidationError on ill-formed input.
std::u32string Decode(std::string_view utf8);
std::string Encode(std::u32string_view text);
void AppendUtf8(char32_t cp, std::string& out);

/// Returns true iff `utf8` is well-formed UTF-8.
bool IsValidUtf8(std::string_view utf8);

/// Canonical composition (NFC).
std::string Nfc(std::string_view utf8);

/// Full Unicode lowercase mapping of every cased letter.
std::string ToLower(std::string_view utf8);

/// Coarse script class used for language tagging and mixed tokenization.
enum class ScriptClass {
  kSpace,
  kHan,
  kTamil,
  kLetter,   // any other alphabetic script (Latin for EN/BM)
  kNeutral,  // digits, punctuation, symbols, controls
  kMark,     // combining mark; takes the class of its base character
};

ScriptClass Classify(char32_t cp);

bool IsSpace(char32_t cp);
bool IsPunctuation(char32_t cp);
bool IsDigit(char32_t cp);
bool IsHan(char32_t cp);

/// Splits on Unicode white space. Never yields empty pieces.
std::vector<std::string> SplitWhitespace(std::string_view utf8);

/// One run of a whitespace-delimited word after splitting at script
/// boundaries. Marks are folded into the preceding run; an apostrophe or
/// hyphen between two letters stays inside the word.
struct ScriptRun {
  std::string text;
  ScriptClass script;
};

std::vector<ScriptRun> SplitScriptRuns(std::string_view word);

/// Key used to look words up across corpora: NFC + lowercase.
std::string WordKey(std::string_view utf8);

}  // namespace csmix::unicode
