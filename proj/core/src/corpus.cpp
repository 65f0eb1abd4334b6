#include "infotweet/corpus.hpp"

#include <algorithm>
#include <array>
#include <unordered_set>

#include "infotweet/delimited.hpp"
#include "infotweet/error.hpp"
#include "infotweet/random.hpp"
#include "infotweet/strings.hpp"
#include "infotweet/textproc.hpp"

namespace infotweet {

std::string_view label_name(Label label) {
  return label == Label::kInformative ? "Informative" : "NotInformative";
}

Dataset::Dataset(std::string name, std::vector<TweetRecord> records)
    : name_(std::move(name)), records_(std::move(records)) {
  std::unordered_set<std::string_view> seen;
  seen.reserve(records_.size());
  bool all_user = !records_.empty();
  for (const TweetRecord& record : records_) {
    if (record.id.empty()) throw DataError("record with empty id");
    if (!seen.insert(record.id).second) throw DataError("duplicate id: " + record.id);
    if (record.text.empty() && !record.degenerate) {
      throw DataError("record " + record.id + " has empty text but is not flagged degenerate");
    }
    all_user = all_user && record.user.has_value();
  }
  has_user_meta_ = all_user;
}

std::vector<Label> Dataset::labels() const {
  std::vector<Label> out;
  out.reserve(records_.size());
  for (const TweetRecord& record : records_) out.push_back(record.label);
  return out;
}

ClassCounts class_counts(const Dataset& dataset) {
  ClassCounts counts;
  for (const TweetRecord& record : dataset.records()) {
    if (record.label == Label::kInformative) {
      ++counts.informative;
    } else {
      ++counts.not_informative;
    }
  }
  return counts;
}

void LabelMap::set(std::string raw, LabelTarget target) {
  mapping_[std::string(trim(raw))] = target;
}

std::optional<LabelTarget> LabelMap::lookup(std::string_view raw) const {
  const auto it = mapping_.find(trim(raw));
  if (it == mapping_.end()) return std::nullopt;
  return it->second;
}

LabelTarget LabelMap::parse_target(std::string_view name) {
  const std::string key = to_lower_ascii(trim(name));
  if (key == "informative") return LabelTarget::kInformative;
  if (key == "notinformative" || key == "not_informative" || key == "not-informative") {
    return LabelTarget::kNotInformative;
  }
  if (key == "drop") return LabelTarget::kDrop;
  throw ConfigError("unknown label target '" + std::string(name) +
                    "' (expected Informative, NotInformative or Drop)");
}

LabelMap LabelMap::parse(std::string_view spec) {
  LabelMap map;
  for (const std::string_view pair : split(spec, ',')) {
    if (trim(pair).empty()) continue;
    const std::size_t eq = pair.rfind('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("label map entry without '=': '" + std::string(pair) + "'");
    }
    map.set(std::string(pair.substr(0, eq)), parse_target(pair.substr(eq + 1)));
  }
  return map;
}

namespace {

std::size_t require_column(const std::vector<std::string>& header, const std::string& name) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw SchemaError("missing column: " + name);
  return static_cast<std::size_t>(it - header.begin());
}

std::optional<std::size_t> find_column(const std::vector<std::string>& header,
                                       const std::string& name) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) return std::nullopt;
  return static_cast<std::size_t>(it - header.begin());
}

std::uint64_t parse_count(const std::string& value, const std::string& column, std::size_t line) {
  std::uint64_t out = 0;
  if (!parse_uint64(value, out)) {
    throw ParseError("line " + std::to_string(line) + ": column " + column +
                     " expects a non-negative integer, got '" + value + "'");
  }
  return out;
}

}  // namespace

Dataset parse_dataset(std::string_view text, const Schema& schema, const LabelMap& label_map,
                      std::string name) {
  std::vector<DelimitedRow> rows = parse_delimited(text, schema.delimiter);
  if (rows.empty()) throw SchemaError("dataset has no header row");
  std::vector<std::string> header = rows.front().fields;
  for (std::string& column : header) column = std::string(trim(column));
  if (!header.empty() && header.front().starts_with("\xEF\xBB\xBF")) header.front().erase(0, 3);

  const std::size_t id_col = require_column(header, schema.id_column);
  const std::size_t text_col = require_column(header, schema.text_column);
  const std::size_t label_col = require_column(header, schema.label_column);

  std::optional<std::array<std::size_t, 4>> user_cols;
  if (schema.user_columns != UserColumns::kIgnored) {
    const std::array<const std::string*, 4> names = {
        &schema.verified_column, &schema.followers_column, &schema.followees_column,
        &schema.tweets_column};
    std::array<std::size_t, 4> found{};
    bool all = true;
    for (std::size_t i = 0; i < names.size(); ++i) {
      const auto col = find_column(header, *names[i]);
      if (!col) {
        if (schema.user_columns == UserColumns::kRequired) {
          throw SchemaError("missing column: " + *names[i]);
        }
        all = false;
        break;
      }
      found[i] = *col;
    }
    if (all) user_cols = found;
  }

  std::vector<TweetRecord> records;
  records.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const DelimitedRow& row = rows[r];
    if (row.fields.size() != header.size()) {
      throw ParseError("line " + std::to_string(row.line) + ": expected " +
                       std::to_string(header.size()) + " fields, found " +
                       std::to_string(row.fields.size()));
    }
    const std::string& raw_label = row.fields[label_col];
    const auto target = label_map.lookup(raw_label);
    if (!target) {
      throw LabelError("line " + std::to_string(row.line) + ": unmapped label '" +
                       std::string(trim(raw_label)) + "'");
    }
    if (*target == LabelTarget::kDrop) continue;

    TweetRecord record;
    record.id = std::string(trim(row.fields[id_col]));
    record.text = row.fields[text_col];
    record.label =
        *target == LabelTarget::kInformative ? Label::kInformative : Label::kNotInformative;
    record.degenerate = normalize(record.text).empty();
    if (user_cols) {
      const auto& cols = *user_cols;
      UserMeta meta;
      const std::uint64_t verified = parse_count(row.fields[cols[0]], schema.verified_column, row.line);
      if (verified > 1) {
        throw ParseError("line " + std::to_string(row.line) + ": column " +
                         schema.verified_column + " expects 0 or 1");
      }
      meta.verified = verified == 1;
      meta.followers = parse_count(row.fields[cols[1]], schema.followers_column, row.line);
      meta.followees = parse_count(row.fields[cols[2]], schema.followees_column, row.line);
      meta.tweets_posted = parse_count(row.fields[cols[3]], schema.tweets_column, row.line);
      record.user = meta;
    }
    records.push_back(std::move(record));
  }
  return Dataset(std::move(name), std::move(records));
}

Dataset load_dataset(const std::filesystem::path& path, const Schema& schema,
                     const LabelMap& label_map, std::string name) {
  if (name.empty()) name = path.stem().string();
  return parse_dataset(read_file(path.string()), schema, label_map, std::move(name));
}

FoldPlan::FoldPlan(std::size_t k, std::vector<std::size_t> assignments)
    : k_(k), assignments_(std::move(assignments)) {
  if (k_ < 2) throw DataError("fold count must be at least 2");
  for (const std::size_t fold : assignments_) {
    if (fold >= k_) throw DataError("fold assignment out of range");
  }
}

std::vector<std::size_t> FoldPlan::test_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments_.size(); ++i) {
    if (assignments_[i] == fold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldPlan::train_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments_.size(); ++i) {
    if (assignments_[i] != fold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldPlan::fold_sizes() const {
  std::vector<std::size_t> sizes(k_, 0);
  for (const std::size_t fold : assignments_) ++sizes[fold];
  return sizes;
}

namespace {

void check_fold_args(std::size_t n, std::size_t k) {
  if (k < 2) throw DataError("fold count must be at least 2, got " + std::to_string(k));
  if (k > n) {
    throw DataError("fold count " + std::to_string(k) + " exceeds dataset size " +
                    std::to_string(n));
  }
}

}  // namespace

FoldPlan make_folds(std::size_t n, std::size_t k, std::uint64_t seed) {
  check_fold_args(n, k);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);

  const std::size_t base = n / k;
  const std::size_t extra = n % k;
  std::vector<std::size_t> assignments(n);
  std::size_t pos = 0;
  for (std::size_t fold = 0; fold < k; ++fold) {
    const std::size_t size = base + (fold < extra ? 1 : 0);
    for (std::size_t j = 0; j < size; ++j) assignments[order[pos++]] = fold;
  }
  return FoldPlan(k, std::move(assignments));
}

FoldPlan make_folds(const Dataset& dataset, std::size_t k, std::uint64_t seed, bool stratified) {
  if (!stratified) return make_folds(dataset.size(), k, seed);
  check_fold_args(dataset.size(), k);

  std::array<std::vector<std::size_t>, 2> by_class;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    by_class[class_index(dataset[i].label)].push_back(i);
  }
  Rng rng(seed);
  std::vector<std::size_t> assignments(dataset.size());
  std::size_t dealt = 0;
  for (auto& members : by_class) {
    rng.shuffle(members);
    for (const std::size_t record : members) assignments[record] = dealt++ % k;
  }
  return FoldPlan(k, std::move(assignments));
}

}  // namespace infotweet
