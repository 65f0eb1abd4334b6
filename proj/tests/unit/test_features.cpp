#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "infotweet/delimited.hpp"
#include "infotweet/error.hpp"
#include "infotweet/features.hpp"
#include "infotweet/random.hpp"
#include "support.hpp"

using namespace infotweet;
using namespace infotweet::testing;

namespace {

const Lexicon& empty_slang() {
  static const Lexicon lex(LexiconKind::kSlang, {});
  return lex;
}
const Lexicon& empty_interj() {
  static const Lexicon lex(LexiconKind::kInterjection, {});
  return lex;
}

enum Slot { kChars, kWords, kHashtags, kUrl, kAt, kBHashtag, kBAt, kBRt, kBSlang, kBUrl, kTLex, kBInterj };

}  // namespace

TEST(TextFeatures, SpecRetweetExample) {
  const TextFeatureBlock f = text_features("RT @a: #flood http://x.co now", empty_slang(), empty_interj());
  EXPECT_EQ(f[kChars], 29.0);
  EXPECT_EQ(f[kHashtags], 1.0);
  EXPECT_EQ(f[kUrl], 1.0);
  EXPECT_EQ(f[kAt], 1.0);
  EXPECT_EQ(f[kBHashtag], 1.0);
  EXPECT_EQ(f[kBAt], 1.0);
  EXPECT_EQ(f[kBRt], 1.0);
  EXPECT_EQ(f[kBUrl], 1.0);
  EXPECT_EQ(f[kBSlang], 0.0);
  EXPECT_EQ(f[kBInterj], 0.0);
}

TEST(TextFeatures, LexicalDiversity) {
  const TextFeatureBlock f = text_features("fire fire help", empty_slang(), empty_interj());
  EXPECT_EQ(f[kWords], 3.0);
  EXPECT_EQ(f[kTLex], 2.0 / 3.0);
}

TEST(TextFeatures, EmptyTweetIsAllZero) {
  const TextFeatureBlock f = text_features("", empty_slang(), empty_interj());
  for (const double v : f) EXPECT_EQ(v, 0.0);
}

TEST(UserFeatures, LogTransform) {
  EXPECT_EQ(user_features({false, 0, 0, 0})[1], 0.0);
  EXPECT_EQ(user_features({false, 999, 0, 0})[1], 3.0);
  const UserFeatureBlock u = user_features({true, 9, 99, 0});
  EXPECT_EQ(u[0], 1.0);
  EXPECT_EQ(u[1], 1.0);
  EXPECT_EQ(u[2], 2.0);
  EXPECT_EQ(u[3], 0.0);
}

TEST(UserFeatures, MonotoneInCounts) {
  double prev = -1.0;
  for (std::uint64_t n : {0ull, 1ull, 2ull, 10ull, 999ull, 1000ull, 123456789ull}) {
    const double v = user_features({false, n, 0, 0})[1];
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(Assemble, LayoutAndMixedWidthError) {
  const TextFeatureBlock t = text_features("hello", empty_slang(), empty_interj());
  EXPECT_EQ(assemble(t, std::nullopt).dims(), 12u);
  const HandcraftedVector full = assemble(t, user_features({true, 9, 99, 0}));
  ASSERT_EQ(full.dims(), 16u);
  EXPECT_EQ(full.values[12], 1.0);
  EXPECT_EQ(full.values[14], 2.0);

  HandcraftedMatrix m;
  m.append("a", full);
  EXPECT_THROW(m.append("b", assemble(t, std::nullopt)), DimensionError);
  EXPECT_THROW(handcrafted_feature_names(13), DimensionError);
}

TEST(Features, CuratedFixtureMatchesFrozenValues) {
  const Dataset d = load_dataset(test_data_dir() / "feature_tweets.tsv", Schema{}, binary_label_map());
  const Lexicon slang = Lexicon::load(test_data_dir() / "fixture_slang.txt", LexiconKind::kSlang);
  const Lexicon interj =
      Lexicon::load(test_data_dir() / "fixture_interjections.txt", LexiconKind::kInterjection);
  const auto rows = parse_delimited(slurp(test_data_dir() / "feature_expected.tsv"), '\t');
  ASSERT_EQ(d.size(), 20u);
  ASSERT_EQ(rows.size(), 21u);
  for (std::size_t j = 0; j < 16; ++j) EXPECT_EQ(rows[0].fields[j + 1], kHandcraftedFeatureNames[j]);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto& expected = rows[i + 1].fields;
    ASSERT_EQ(expected[0], d.records()[i].id);
    const HandcraftedVector v = handcrafted_features(d.records()[i], slang, interj);
    ASSERT_EQ(v.dims(), 16u);
    for (std::size_t j = 0; j < 16; ++j) {
      const std::string& cell = expected[j + 1];
      double want = 0.0;
      if (const auto slash = cell.find('/'); slash != std::string::npos) {
        want = std::stod(cell.substr(0, slash)) / std::stod(cell.substr(slash + 1));
      } else {
        want = std::stod(cell);
      }
      EXPECT_EQ(v.values[j], want) << d.records()[i].id << " " << kHandcraftedFeatureNames[j];
    }
  }
}

TEST(Features, InvariantsOnRandomText) {
  Rng rng(8);
  const std::vector<std::string> words = {"fire", "#tag", "@who", "http://u.rl/x", "lol", "wow",
                                          "RT", "flood", "!!", "\xC3\xA9t\xC3\xA9"};
  const std::vector<std::string> slang_terms = {"lol"};
  const std::vector<std::string> interj_terms = {"wow"};
  const Lexicon slang(LexiconKind::kSlang, slang_terms);
  const Lexicon interj(LexiconKind::kInterjection, interj_terms);
  for (int trial = 0; trial < 500; ++trial) {
    std::string text;
    const std::size_t n = rng.uniform_index(12);
    for (std::size_t i = 0; i < n; ++i) text += (i ? " " : "") + words[rng.uniform_index(words.size())];
    const TextFeatureBlock f = text_features(text, slang, interj);
    EXPECT_EQ(f[kBHashtag], f[kHashtags] >= 1 ? 1.0 : 0.0);
    EXPECT_EQ(f[kBUrl], f[kUrl] >= 1 ? 1.0 : 0.0);
    EXPECT_EQ(f[kBAt], f[kAt] >= 1 ? 1.0 : 0.0);
    EXPECT_GE(f[kTLex], 0.0);
    EXPECT_LE(f[kTLex], 1.0);
    const TokenList tokens = analyze(text);
    const std::set<std::string> distinct(tokens.begin(), tokens.end());
    if (!tokens.empty()) EXPECT_EQ(f[kTLex] == 1.0, distinct.size() == tokens.size());
    for (const Slot s : {kBRt, kBSlang, kBInterj}) EXPECT_TRUE(f[s] == 0.0 || f[s] == 1.0);
  }
}

TEST(Features, TsvExport) {
  HandcraftedMatrix m;
  m.append("x1", assemble(text_features("fire fire help", empty_slang(), empty_interj()), std::nullopt));
  std::ostringstream out;
  m.write_tsv(out);
  EXPECT_EQ(out.str(),
            "id\tn_chars\tn_words\tn_hashtags\tn_url\tn_at\tb_hashtag\tb_at\tb_rt\tb_slang\tb_url\t"
            "t_lex\tb_interj\n"
            "x1\t14\t3\t0\t0\t0\t0\t0\t0\t0\t0\t0.6666666666666666\t0\n");
}
