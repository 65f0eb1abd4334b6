#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace infotweet {

// Class index 0 is Informative; the hybrid head's softmax uses the same order.
enum class Label : std::uint8_t { kInformative = 0, kNotInformative = 1 };

inline constexpr std::size_t class_index(Label label) { return static_cast<std::size_t>(label); }
std::string_view label_name(Label label);

struct UserMeta {
  bool verified = false;
  std::uint64_t followers = 0;
  std::uint64_t followees = 0;
  std::uint64_t tweets_posted = 0;
};

struct TweetRecord {
  std::string id;
  std::string text;
  Label label = Label::kNotInformative;
  std::optional<UserMeta> user;
  // Text normalizes to the empty string. Kept so that every feature set
  // evaluates the same records.
  bool degenerate = false;
};

struct ClassCounts {
  std::size_t informative = 0;
  std::size_t not_informative = 0;
  std::size_t total() const { return informative + not_informative; }
};

class Dataset {
 public:
  Dataset() = default;
  // Throws DataError on empty or duplicate ids, or on empty text that is not
  // flagged degenerate.
  Dataset(std::string name, std::vector<TweetRecord> records);

  const std::string& name() const { return name_; }
  const std::vector<TweetRecord>& records() const { return records_; }
  const TweetRecord& operator[](std::size_t i) const { return records_[i]; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  bool has_user_meta() const { return has_user_meta_; }
  std::vector<Label> labels() const;

 private:
  std::string name_;
  std::vector<TweetRecord> records_;
  bool has_user_meta_ = false;
};

ClassCounts class_counts(const Dataset& dataset);

enum class LabelTarget { kInformative, kNotInformative, kDrop };

class LabelMap {
 public:
  LabelMap() = default;
  void set(std::string raw, LabelTarget target);
  std::optional<LabelTarget> lookup(std::string_view raw) const;
  bool empty() const { return mapping_.empty(); }

  // "raw=Target" pairs separated by commas; Target is Informative,
  // NotInformative or Drop (case-insensitive).
  static LabelMap parse(std::string_view spec);
  static LabelTarget parse_target(std::string_view name);

 private:
  std::map<std::string, LabelTarget, std::less<>> mapping_;
};

enum class UserColumns {
  kAuto,      // use the four user columns when all of them are present
  kRequired,  // missing user columns are a schema error
  kIgnored,
};

struct Schema {
  char delimiter = '\t';
  std::string id_column = "id";
  std::string text_column = "text";
  std::string label_column = "label";
  UserColumns user_columns = UserColumns::kAuto;
  std::string verified_column = "user_verified";
  std::string followers_column = "user_followers";
  std::string followees_column = "user_followees";
  std::string tweets_column = "user_tweets";
};

Dataset load_dataset(const std::filesystem::path& path, const Schema& schema,
                     const LabelMap& label_map, std::string name = {});
// Same as load_dataset but over in-memory text.
Dataset parse_dataset(std::string_view text, const Schema& schema, const LabelMap& label_map,
                      std::string name);

class FoldPlan {
 public:
  FoldPlan(std::size_t k, std::vector<std::size_t> assignments);

  std::size_t k() const { return k_; }
  std::size_t size() const { return assignments_.size(); }
  const std::vector<std::size_t>& assignments() const { return assignments_; }
  std::size_t fold_of(std::size_t record) const { return assignments_[record]; }

  std::vector<std::size_t> test_indices(std::size_t fold) const;
  std::vector<std::size_t> train_indices(std::size_t fold) const;
  std::vector<std::size_t> fold_sizes() const;

  friend bool operator==(const FoldPlan&, const FoldPlan&) = default;

 private:
  std::size_t k_;
  std::vector<std::size_t> assignments_;
};

// Seeded uniform permutation cut into k consecutive chunks; the first n % k
// chunks get one extra record. With stratified set, each class is shuffled
// separately and dealt round-robin so class ratios are balanced per fold.
FoldPlan make_folds(std::size_t n, std::size_t k, std::uint64_t seed);
FoldPlan make_folds(const Dataset& dataset, std::size_t k, std::uint64_t seed,
                    bool stratified = false);

}  // namespace infotweet
