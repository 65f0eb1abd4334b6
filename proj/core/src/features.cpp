#include "infotweet/features.hpp"

#include <cmath>
#include <ostream>
#include <unordered_set>

#include "infotweet/error.hpp"
#include "infotweet/strings.hpp"

namespace infotweet {

TextFeatureBlock text_features(std::string_view raw, const Lexicon& slang,
                               const Lexicon& interjections) {
  const PatternCounts patterns = detect_patterns(raw);
  const TokenList tokens = analyze(raw);

  std::unordered_set<std::string_view> distinct(tokens.begin(), tokens.end());
  const double lexical_diversity =
      tokens.empty() ? 0.0
                     : static_cast<double>(distinct.size()) / static_cast<double>(tokens.size());

  auto flag = [](bool b) { return b ? 1.0 : 0.0; };
  return {
      static_cast<double>(count_code_points(raw)),
      static_cast<double>(tokens.size()),
      static_cast<double>(patterns.hashtags),
      static_cast<double>(patterns.urls),
      static_cast<double>(patterns.mentions),
      flag(patterns.hashtags > 0),
      flag(patterns.mentions > 0),
      flag(patterns.is_retweet),
      flag(contains_lexicon_term(tokens, slang)),
      flag(patterns.urls > 0),
      lexical_diversity,
      flag(contains_lexicon_term(tokens, interjections)),
  };
}

UserFeatureBlock user_features(const UserMeta& meta) {
  auto log_count = [](std::uint64_t n) { return std::log10(static_cast<double>(n) + 1.0); };
  return {meta.verified ? 1.0 : 0.0, log_count(meta.followers), log_count(meta.followees),
          log_count(meta.tweets_posted)};
}

HandcraftedVector assemble(const TextFeatureBlock& text,
                           const std::optional<UserFeatureBlock>& user) {
  HandcraftedVector out;
  out.values.assign(text.begin(), text.end());
  if (user) out.values.insert(out.values.end(), user->begin(), user->end());
  return out;
}

HandcraftedVector handcrafted_features(const TweetRecord& record, const Lexicon& slang,
                                       const Lexicon& interjections) {
  std::optional<UserFeatureBlock> user;
  if (record.user) user = user_features(*record.user);
  return assemble(text_features(record.text, slang, interjections), user);
}

std::span<const std::string_view> handcrafted_feature_names(std::size_t dims) {
  if (dims != kTextFeatureCount && dims != kTextFeatureCount + kUserFeatureCount) {
    throw DimensionError("handcrafted vectors have 12 or 16 slots, got " + std::to_string(dims));
  }
  return std::span<const std::string_view>(kHandcraftedFeatureNames).first(dims);
}

void HandcraftedMatrix::append(std::string id, HandcraftedVector vector) {
  if (ids_.empty()) {
    handcrafted_feature_names(vector.dims());
    dims_ = vector.dims();
  } else if (vector.dims() != dims_) {
    throw DimensionError("record " + id + " has " + std::to_string(vector.dims()) +
                         " handcrafted slots but the matrix has " + std::to_string(dims_));
  }
  ids_.push_back(std::move(id));
  rows_.push_back(std::move(vector));
}

void HandcraftedMatrix::write_tsv(std::ostream& out) const {
  out << "id";
  if (dims_ > 0) {
    for (const std::string_view name : handcrafted_feature_names(dims_)) out << '\t' << name;
  }
  out << '\n';
  for (std::size_t r = 0; r < rows(); ++r) {
    out << ids_[r];
    for (const double v : rows_[r].values) out << '\t' << format_shortest(v);
    out << '\n';
  }
}

HandcraftedMatrix featurize(const Dataset& dataset, const Lexicon& slang,
                            const Lexicon& interjections) {
  HandcraftedMatrix matrix;
  for (const TweetRecord& record : dataset.records()) {
    matrix.append(record.id, handcrafted_features(record, slang, interjections));
  }
  return matrix;
}

}  // namespace infotweet
