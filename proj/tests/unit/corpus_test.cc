// tests/unit/corpus_test.cc

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

#include "csmix/corpus.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "csmix/error.hpp"
#include "csmix/unicode.hpp"
#include "fixtures.hpp"

namespace csmix {
namespace {

std::string Record(const std::string& id, const std::string& text, const std::string& tokens) {
  return R"({"id":")" + id + R"(","sample_rate":16000,"duration_s":1.0,"text":")" + text +
         R"(","tokens":)" + tokens + "}";
}

Manifest ReadString(const std::string& s) {
  std::istringstream in(s);
  return ReadManifest(in);
}

TEST(LangTag, RoundTrip) {
  for (LangTag t : {LangTag::kEn, LangTag::kZh, LangTag::kBm, LangTag::kTa, LangTag::kNeutral}) {
    EXPECT_EQ(LangTagFromString(ToString(t)), t);
  }
  EXPECT_FALSE(ParseLangTag("XX").has_value());
  EXPECT_THROW(LangTagFromString("XX"), Error);
}

TEST(ReadManifest, TwoLines) {
  const Manifest m = ReadString(
      Record("u1", "saya suka", R"([{"w":"saya","lang":"BM"},{"w":"suka","lang":"BM"}])") +
      "\n" + Record("u2", "i like", R"([{"w":"i","lang":"EN"},{"w":"like","lang":"EN"}])") +
      "\n");
  ASSERT_EQ(m.utterances.size(), 2u);
  EXPECT_EQ(m.language_inventory, (std::set<LangTag>{LangTag::kBm, LangTag::kEn}));
  EXPECT_EQ(m.Find("u2"), std::optional<std::size_t>(1));
  EXPECT_NEAR(m.Hours(), 2.0 / 3600.0, 1e-12);
}

TEST(ReadManifest, EmptyFile) {
  const Manifest m = ReadString("");
  EXPECT_TRUE(m.utterances.empty());
  EXPECT_TRUE(m.language_inventory.empty());
}

TEST(ReadManifest, DuplicateIdNamesIdAndLine) {
  const std::string line = Record("dup", "a", R"([{"w":"a","lang":"EN"}])");
  try {
    ReadString(line + "\n" + line + "\n");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kValidation);
    const std::string what = e.what();
    EXPECT_NE(what.find("dup"), std::string::npos) << what;
    EXPECT_NE(what.find("line 2"), std::string::npos) << what;
  }
}

TEST(ReadManifest, RejectsMalformedAndUnknownLang) {
  EXPECT_THROW(ReadString("{not json\n"), Error);
  EXPECT_THROW(ReadString(Record("u", "a", R"([{"w":"a","lang":"XX"}])") + "\n"), Error);
  // Tokens that do not spell the text.
  EXPECT_THROW(ReadString(Record("u", "a b", R"([{"w":"a","lang":"EN"}])") + "\n"), Error);
  // Whitespace inside a token.
  EXPECT_THROW(ReadString(Record("u", "a b", R"([{"w":"a b","lang":"EN"}])") + "\n"), Error);
}

TEST(ReadManifest, MissingFileIsIoError) {
  try {
    ReadManifest("/nonexistent/manifest.jsonl");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kIo);
  }
}

TEST(WriteManifest, EmptyManifestGivesEmptyFile) {
  testing::TempDir dir;
  WriteManifest(Manifest{}, dir / "m.jsonl");
  EXPECT_EQ(testing::ReadFileBytes(dir / "m.jsonl"), "");
}

TEST(WriteManifest, RoundTripPreservesUnicodeAndExtras) {
  const std::string src =
      R"({"id":"t1","audio":"a/t1.wav","sample_rate":16000,"duration_s":1.25,"text":"நான் school 去","tokens":[{"w":"நான்","lang":"TA"},{"w":"school","lang":"EN"},{"w":"去","lang":"ZH"}],"speaker":"s1","meta":{"k":[1,2]}})";
  const Manifest m = ReadString(src + "\n");
  std::ostringstream out;
  WriteManifest(m, out);
  EXPECT_EQ(out.str(), src + "\n");
  EXPECT_EQ(ReadString(out.str()), m);
}

TEST(WriteManifest, RoundTripRandomUnicode) {
  std::mt19937 gen(5);
  const std::vector<std::u32string> pools = {U"的一是不了人我在有他这中大来上国",
                                             U"அஆஇஈஉஊஎஏஐஒஓகஙசஞடணதநபமயரலவழளறன",
                                             U"abcdefghijklmnopqrstuvwxyz"};
  const LangTag tags[] = {LangTag::kZh, LangTag::kTa, LangTag::kEn};
  Manifest m;
  for (int u = 0; u < 50; ++u) {
    Utterance utt;
    utt.id = "r" + std::to_string(u);
    utt.duration_s = 0.5 + u;
    for (int w = 0; w < 6; ++w) {
      const std::size_t p = gen() % 3;
      std::u32string word;
      for (int c = 0; c < 1 + static_cast<int>(gen() % 4); ++c) {
        word += pools[p][gen() % pools[p].size()];
      }
      utt.tokens.push_back({unicode::Encode(word), tags[p]});
    }
    utt.text = JoinSurfaces(utt.tokens);
    m.utterances.push_back(utt);
  }
  ValidateManifest(m);
  std::ostringstream out;
  WriteManifest(m, out);
  const Manifest back = ReadString(out.str());
  EXPECT_EQ(back, m);
  std::ostringstream again;
  WriteManifest(back, again);
  EXPECT_EQ(again.str(), out.str());
}

TEST(ReadManifest, AppliesNfc) {
  const Manifest m =
      ReadString(Record("u", "cafe\u0301", R"([{"w":"café","lang":"EN"}])") + "\n");
  EXPECT_EQ(m.utterances[0].text, "caf\xc3\xa9");
  EXPECT_EQ(m.utterances[0].tokens[0].surface, "caf\xc3\xa9");
}

TEST(ResolveAudioPath, RelativeToManifest) {
  EXPECT_EQ(ResolveAudioPath("/data/set/manifest.jsonl", "audio/x.wav"),
            std::filesystem::path("/data/set/audio/x.wav"));
  EXPECT_EQ(ResolveAudioPath("/data/set/manifest.jsonl", "/abs/x.wav"),
            std::filesystem::path("/abs/x.wav"));
}

std::vector<std::pair<std::string, LangTag>> Flatten(const std::vector<Token>& toks) {
  std::vector<std::pair<std::string, LangTag>> out;
  for (const Token& t : toks) out.emplace_back(t.surface, t.lang);
  return out;
}

TEST(TagTokens, HanAndLatin) {
  using P = std::pair<std::string, LangTag>;
  EXPECT_EQ(Flatten(TagTokens("我 去 school", {LangTag::kZh, LangTag::kEn})),
            (std::vector<P>{{"我", LangTag::kZh}, {"去", LangTag::kZh}, {"school", LangTag::kEn}}));
}

TEST(TagTokens, NeutralClass) {
  using P = std::pair<std::string, LangTag>;
  EXPECT_EQ(Flatten(TagTokens("123 !", {LangTag::kZh, LangTag::kEn})),
            (std::vector<P>{{"123", LangTag::kNeutral}, {"!", LangTag::kNeutral}}));
}

TEST(TagTokens, LexiconLookup) {
  using P = std::pair<std::string, LangTag>;
  const Lexicon lex{{"makan", LangTag::kBm}};
  EXPECT_EQ(Flatten(TagTokens("makan lunch", {LangTag::kBm, LangTag::kEn}, &lex)),
            (std::vector<P>{{"makan", LangTag::kBm}, {"lunch", LangTag::kEn}}));
  // Without EN in the pair the Latin default is BM.
  EXPECT_EQ(Flatten(TagTokens("makan", {LangTag::kZh, LangTag::kBm})),
            (std::vector<P>{{"makan", LangTag::kBm}}));
}

TEST(TagTokens, TamilAndMixedScriptSplit) {
  using P = std::pair<std::string, LangTag>;
  EXPECT_EQ(Flatten(TagTokens("நான் 去school", {LangTag::kTa, LangTag::kEn})),
            (std::vector<P>{{"நான்", LangTag::kTa}, {"去", LangTag::kZh}, {"school", LangTag::kEn}}));
}

TEST(TagTokens, LengthEqualsWhitespaceTokenCountForSingleScriptWords) {
  std::mt19937 gen(3);
  const std::vector<std::string> words = {"saya", "我", "நான்", "42", "!", "School", "去"};
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    const int n = static_cast<int>(gen() % 12);
    for (int i = 0; i < n; ++i) text += std::string(gen() % 3 == 0 ? "  " : " ") + words[gen() % words.size()];
    const auto toks = TagTokens(text, {LangTag::kBm, LangTag::kEn});
    EXPECT_EQ(toks.size(), unicode::SplitWhitespace(unicode::Nfc(text)).size()) << text;
    EXPECT_EQ(TagTokens(text, {LangTag::kBm, LangTag::kEn}), toks);
  }
}

TEST(ReadLexicon, ParsesWordLangLines) {
  testing::TempDir dir;
  {
    std::ofstream out(dir / "lex.txt");
    out << "# comment\nmakan BM\nLunch EN\n";
  }
  const Lexicon lex = ReadLexicon(dir / "lex.txt");
  EXPECT_EQ(lex.size(), 2u);
  EXPECT_EQ(lex.at("makan"), LangTag::kBm);
  EXPECT_EQ(lex.at("lunch"), LangTag::kEn);
}

}  // namespace
}  // namespace csmix
