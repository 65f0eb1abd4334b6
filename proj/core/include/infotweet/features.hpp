#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "infotweet/corpus.hpp"
#include "infotweet/textproc.hpp"

namespace infotweet {

inline constexpr std::size_t kTextFeatureCount = 12;
inline constexpr std::size_t kUserFeatureCount = 4;

// Bumped whenever the slot order or a slot definition changes; stored in
// model files so that models reject vectors from a different extractor.
inline constexpr std::string_view kHandcraftedLayoutVersion = "handcrafted-v1";

inline constexpr std::array<std::string_view, kTextFeatureCount + kUserFeatureCount>
    kHandcraftedFeatureNames = {
        "n_chars",   "n_words",       "n_hashtags",      "n_url",
        "n_at",      "b_hashtag",     "b_at",            "b_rt",
        "b_slang",   "b_url",         "t_lex",           "b_interj",
        "b_usr",     "n_followers_log", "n_followees_log", "n_tweets_log"};

using TextFeatureBlock = std::array<double, kTextFeatureCount>;
using UserFeatureBlock = std::array<double, kUserFeatureCount>;

struct HandcraftedVector {
  std::vector<double> values;  // 12 or 16 slots in kHandcraftedFeatureNames order

  std::size_t dims() const { return values.size(); }
  bool has_user_block() const { return values.size() == kTextFeatureCount + kUserFeatureCount; }
};

TextFeatureBlock text_features(std::string_view raw, const Lexicon& slang,
                               const Lexicon& interjections);
UserFeatureBlock user_features(const UserMeta& meta);
HandcraftedVector assemble(const TextFeatureBlock& text, const std::optional<UserFeatureBlock>& user);

HandcraftedVector handcrafted_features(const TweetRecord& record, const Lexicon& slang,
                                       const Lexicon& interjections);

std::span<const std::string_view> handcrafted_feature_names(std::size_t dims);

// Rows of handcrafted vectors that must all share one layout.
class HandcraftedMatrix {
 public:
  // Throws DimensionError when the vector's width differs from earlier rows.
  void append(std::string id, HandcraftedVector vector);

  std::size_t rows() const { return ids_.size(); }
  std::size_t dims() const { return dims_; }
  const std::vector<std::string>& ids() const { return ids_; }
  const HandcraftedVector& row(std::size_t i) const { return rows_[i]; }

  // Tab-separated: header "id" then feature names, one row per record.
  void write_tsv(std::ostream& out) const;

 private:
  std::size_t dims_ = 0;
  std::vector<std::string> ids_;
  std::vector<HandcraftedVector> rows_;
};

HandcraftedMatrix featurize(const Dataset& dataset, const Lexicon& slang,
                            const Lexicon& interjections);

}  // namespace infotweet
