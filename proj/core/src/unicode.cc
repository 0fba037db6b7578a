// core/src/unicode.cc

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

#include "csmix/unicode.hpp"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/uscript.h>
#include <unicode/utf8.h>

#include "csmix/error.hpp"

namespace csmix::unicode {

std::u32string Decode(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  const auto* s = reinterpret_cast<const uint8_t*>(utf8.data());
  const int32_t length = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  while (i < length) {
    const int32_t at = i;
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) {
      throw ValidationError("ill-formed UTF-8 at byte " + std::to_string(at));
    }
    out.push_back(static_cast<char32_t>(c));
  }
  return out;
}

void AppendUtf8(char32_t cp, std::string& out) {
  uint8_t buf[U8_MAX_LENGTH];
  int32_t n = 0;
  UBool error = false;
  U8_APPEND(buf, n, U8_MAX_LENGTH, static_cast<UChar32>(cp), error);
  if (error) throw ValidationError("cannot encode code point as UTF-8");
  out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
}

std::string Encode(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : text) AppendUtf8(cp, out);
  return out;
}

bool IsValidUtf8(std::string_view utf8) {
  const auto* s = reinterpret_cast<const uint8_t*>(utf8.data());
  const int32_t length = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) return false;
  }
  return true;
}

namespace {

icu::UnicodeString ToIcu(std::string_view utf8) {
  if (!IsValidUtf8(utf8)) throw ValidationError("ill-formed UTF-8 text");
  return icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
}

std::string FromIcu(const icu::UnicodeString& s) {
  std::string out;
  s.toUTF8String(out);
  return out;
}

const icu::Normalizer2& NfcInstance() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || nfc == nullptr) {
    throw std::runtime_error("ICU NFC normalizer unavailable");
  }
  return *nfc;
}

bool IsAsciiOnly(std::string_view s) {
  for (char c : s) {
    if (static_cast<unsigned char>(c) >= 0x80) return false;
  }
  return true;
}

}  // namespace

std::string Nfc(std::string_view utf8) {
  if (IsAsciiOnly(utf8)) return std::string(utf8);
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString out = NfcInstance().normalize(ToIcu(utf8), status);
  if (U_FAILURE(status)) throw ValidationError("NFC normalization failed");
  return FromIcu(out);
}

std::string ToLower(std::string_view utf8) {
  if (IsAsciiOnly(utf8)) {
    std::string out(utf8);
    for (char& c : out) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
  }
  icu::UnicodeString s = ToIcu(utf8);
  s.toLower(icu::Locale::getRoot());
  return FromIcu(s);
}

bool IsSpace(char32_t cp) { return u_isUWhiteSpace(static_cast<UChar32>(cp)); }

bool IsPunctuation(char32_t cp) { return u_ispunct(static_cast<UChar32>(cp)); }

bool IsDigit(char32_t cp) {
  return u_charType(static_cast<UChar32>(cp)) == U_DECIMAL_DIGIT_NUMBER;
}

bool IsHan(char32_t cp) {
  UErrorCode status = U_ZERO_ERROR;
  return uscript_getScript(static_cast<UChar32>(cp), &status) == USCRIPT_HAN &&
         U_SUCCESS(status);
}

ScriptClass Classify(char32_t cp) {
  const auto c = static_cast<UChar32>(cp);
  if (u_isUWhiteSpace(c)) return ScriptClass::kSpace;
  // Both Tamil blocks, including their unassigned slots.
  if ((cp >= 0x0B80 && cp <= 0x0BFF) || (cp >= 0x11FC0 && cp <= 0x11FFF)) {
    return ScriptClass::kTamil;
  }
  UErrorCode status = U_ZERO_ERROR;
  const UScriptCode script = uscript_getScript(c, &status);
  if (U_SUCCESS(status)) {
    if (script == USCRIPT_HAN) return ScriptClass::kHan;
    if (script == USCRIPT_TAMIL) return ScriptClass::kTamil;
  }
  const int32_t mask = U_GET_GC_MASK(c);
  if (mask & U_GC_L_MASK) return ScriptClass::kLetter;
  if (mask & U_GC_M_MASK) return ScriptClass::kMark;
  return ScriptClass::kNeutral;
}

std::vector<std::string> SplitWhitespace(std::string_view utf8) {
  std::vector<std::string> out;
  std::string current;
  for (char32_t cp : Decode(utf8)) {
    if (IsSpace(cp)) {
      if (!current.empty()) out.push_back(std::move(current));
      current.clear();
    } else {
      AppendUtf8(cp, current);
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

namespace {

bool IsWordConnector(char32_t cp) {
  return cp == U'\'' || cp == U'’' || cp == U'-';
}

}  // namespace

std::vector<ScriptRun> SplitScriptRuns(std::string_view word) {
  const std::u32string cps = Decode(word);
  std::vector<ScriptClass> classes(cps.size());
  for (std::size_t i = 0; i < cps.size(); ++i) {
    ScriptClass c = Classify(cps[i]);
    if (c == ScriptClass::kMark) {
      c = i > 0 ? classes[i - 1] : ScriptClass::kNeutral;
    }
    classes[i] = c;
  }
  // Apostrophes and hyphens between two letters belong to the word.
  for (std::size_t i = 1; i + 1 < cps.size(); ++i) {
    if (IsWordConnector(cps[i]) && classes[i - 1] == ScriptClass::kLetter &&
        Classify(cps[i + 1]) == ScriptClass::kLetter) {
      classes[i] = ScriptClass::kLetter;
    }
  }

  std::vector<ScriptRun> runs;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    if (classes[i] == ScriptClass::kSpace) continue;
    if (runs.empty() || runs.back().script != classes[i] ||
        (i > 0 && classes[i - 1] == ScriptClass::kSpace)) {
      runs.push_back({std::string(), classes[i]});
    }
    AppendUtf8(cps[i], runs.back().text);
  }
  return runs;
}

std::string WordKey(std::string_view utf8) { return Nfc(ToLower(Nfc(utf8))); }

}  // namespace csmix::unicode
