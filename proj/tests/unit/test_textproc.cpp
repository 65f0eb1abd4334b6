#include <gtest/gtest.h>

#include <json.hpp>

#include "infotweet/error.hpp"
#include "infotweet/random.hpp"
#include "infotweet/strings.hpp"
#include "infotweet/textproc.hpp"
#include "support.hpp"

using namespace infotweet;
using namespace infotweet::testing;

TEST(DetectPatterns, SpecExample) {
  const PatternCounts p = detect_patterns("RT @alice: #fire in #cbd http://x.co");
  EXPECT_EQ(p.hashtags, 2u);
  EXPECT_EQ(p.mentions, 1u);
  EXPECT_EQ(p.urls, 1u);
  EXPECT_TRUE(p.is_retweet);
}

TEST(DetectPatterns, EmptyString) {
  const PatternCounts p = detect_patterns("");
  EXPECT_EQ(p.hashtags, 0u);
  EXPECT_EQ(p.mentions, 0u);
  EXPECT_EQ(p.urls, 0u);
  EXPECT_FALSE(p.is_retweet);
}

TEST(DetectPatterns, EmailCountsAsMention) {
  EXPECT_EQ(detect_patterns("email me at name@host").mentions, 1u);
}

TEST(DetectPatterns, RunsOnRawTextOnly) {
  EXPECT_EQ(detect_patterns("#a").hashtags, 1u);
  EXPECT_EQ(detect_patterns(normalize("#a").str()).hashtags, 0u);
}

TEST(DetectPatterns, BareDomainsAreNotUrls) {
  EXPECT_EQ(detect_patterns("bit.ly/x www.site.com").urls, 0u);
}

TEST(DetectPatterns, MatchesRegexOracleFixture) {
  // The input column is a JSON string literal, so the file is split by hand
  // rather than through the quote-aware reader.
  const std::string text = slurp(test_data_dir() / "patterns.tsv");
  std::vector<std::string_view> lines;
  for (const std::string_view l : split(text, '\n')) {
    if (!l.empty()) lines.push_back(l);
  }
  ASSERT_EQ(lines.size(), 51u);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split(lines[i], '\t');
    ASSERT_EQ(f.size(), 5u);
    const std::string input = nlohmann::json::parse(f[0]).get<std::string>();
    const PatternCounts p = detect_patterns(input);
    EXPECT_EQ(p.hashtags, std::stoul(std::string(f[1]))) << input;
    EXPECT_EQ(p.mentions, std::stoul(std::string(f[2]))) << input;
    EXPECT_EQ(p.urls, std::stoul(std::string(f[3]))) << input;
    EXPECT_EQ(p.is_retweet, f[4] == "1") << input;
  }
}

TEST(Normalize, SpecExamples) {
  EXPECT_EQ(normalize("Flood!!! in CBD\xE2\x80\xA6").str(), "flood in cbd");
  EXPECT_EQ(normalize("\xC3\xA7" "a va #ok").str(), "a va ok");
  EXPECT_EQ(normalize("flood,fire").str(), "flood fire");
  EXPECT_EQ(normalize("   ").str(), "");
}

namespace {

std::string random_text(Rng& rng) {
  static const std::vector<std::string> pieces = {
      "a", "Z", "9", " ", "\t", "\n", "#", "@", "!", ".", "http://", "\xC3\xA7", "\xF0\x9F\x94\xA5",
      "\xE2\x80\xA6", "RT", "_", "-", "\x7F", "\x01", "Word"};
  std::string s;
  const std::size_t len = rng.uniform_index(30);
  for (std::size_t i = 0; i < len; ++i) s += pieces[rng.uniform_index(pieces.size())];
  return s;
}

}  // namespace

TEST(Normalize, IdempotentAsciiLowercaseOnRandomStrings) {
  Rng rng(1234);
  for (int i = 0; i < 1000; ++i) {
    const std::string raw = random_text(rng);
    const NormalizedText once = normalize(raw);
    EXPECT_EQ(normalize(once.str()).str(), once.str());
    for (const char c : once.str()) {
      EXPECT_LT(static_cast<unsigned char>(c), 0x80);
      EXPECT_FALSE(c >= 'A' && c <= 'Z');
    }
    for (const std::string& token : tokenize(once)) {
      EXPECT_FALSE(token.empty());
      EXPECT_EQ(token.find(' '), std::string::npos);
    }
  }
}

TEST(Tokenize, SpecExamples) {
  EXPECT_EQ(tokenize(normalize("flood in cbd")), (TokenList{"flood", "in", "cbd"}));
  EXPECT_TRUE(tokenize(normalize("")).empty());
  EXPECT_EQ(tokenize(normalize("a  b")), (TokenList{"a", "b"}));
}

TEST(Analyze, UrlsAreRemovedBeforeTokenizing) {
  EXPECT_EQ(analyze("see http://t.co/AbC now"), (TokenList{"see", "now"}));
  EXPECT_EQ(analyze("HTTPS://X.Y/z"), TokenList{});
}

TEST(CodePoints, CountsUtf8Characters) {
  EXPECT_EQ(count_code_points(""), 0u);
  EXPECT_EQ(count_code_points("abc"), 3u);
  EXPECT_EQ(count_code_points("\xC3\xA7" "a"), 2u);
  EXPECT_EQ(count_code_points("\xF0\x9F\x94\xA5"), 1u);
}

TEST(Lexicon, ExactTokenMembership) {
  const std::vector<std::string> terms = {"omg"};
  const Lexicon lex(LexiconKind::kSlang, terms);
  EXPECT_TRUE(contains_lexicon_term(TokenList{"omg", "help"}, lex));
  EXPECT_FALSE(contains_lexicon_term(TokenList{}, lex));
  EXPECT_FALSE(contains_lexicon_term(TokenList{"omgreat"}, lex));
}

TEST(Lexicon, TermsAreNormalized) {
  const std::vector<std::string> terms = {"  LOL ", "Wow!"};
  const Lexicon lex(LexiconKind::kInterjection, terms);
  EXPECT_TRUE(lex.contains("lol"));
  EXPECT_TRUE(lex.contains("wow"));
  EXPECT_EQ(lex.size(), 2u);
}

TEST(Lexicon, LoadSkipsCommentsAndBlankLines) {
  TempDir dir("lexicon");
  spit(dir.path() / "l.txt", "# header\n\nLOL\n  smh  \n");
  const Lexicon lex = Lexicon::load(dir.path() / "l.txt", LexiconKind::kSlang);
  EXPECT_EQ(lex.size(), 2u);
  EXPECT_TRUE(lex.contains("smh"));
}

TEST(Lexicon, LoadErrors) {
  TempDir dir("lexicon");
  spit(dir.path() / "empty.txt", "# only a comment\n");
  EXPECT_THROW(Lexicon::load(dir.path() / "empty.txt", LexiconKind::kSlang), ParseError);
  spit(dir.path() / "multi.txt", "ok\ntwo words\n");
  try {
    Lexicon::load(dir.path() / "multi.txt", LexiconKind::kSlang);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find(":2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(Lexicon::load(dir.path() / "missing.txt", LexiconKind::kSlang), Error);
}

TEST(Lexicon, BundledFilesLoad) {
  const Lexicon slang = Lexicon::load(bundled_data_dir() / "lexicons" / "slang.txt", LexiconKind::kSlang);
  const Lexicon interj =
      Lexicon::load(bundled_data_dir() / "lexicons" / "interjections.txt", LexiconKind::kInterjection);
  EXPECT_TRUE(slang.contains("lol"));
  EXPECT_TRUE(interj.contains("wow"));
}
