#include "config.hpp"

#include <functional>
#include <set>

#include "infotweet/delimited.hpp"
#include "infotweet/error.hpp"
#include "infotweet/strings.hpp"

namespace infotweet::cli {

RawConfig RawConfig::parse(std::string_view text, const std::string& source,
                           std::filesystem::path base_dir) {
  RawConfig config;
  std::size_t line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(trim(body.substr(0, eq)));
    if (key.empty()) throw ConfigError(source + ":" + std::to_string(line_no) + ": empty key");
    config.set(key, std::string(trim(body.substr(eq + 1))), source + ":" + std::to_string(line_no),
               base_dir);
  }
  return config;
}

RawConfig RawConfig::load(const std::filesystem::path& path) {
  if (!std::filesystem::is_regular_file(path)) {
    throw ConfigError("config file '" + path.string() + "' does not exist");
  }
  const std::filesystem::path base = path.has_parent_path() ? path.parent_path() : ".";
  return parse(read_file(path.string()), path.string(), base);
}

void RawConfig::set(const std::string& key, std::string value, std::string origin,
                    std::filesystem::path base) {
  entries_[key] = Entry{std::move(value), std::move(origin), std::move(base)};
}

LabelMap default_label_map() {
  LabelMap map;
  for (const char* raw : {"Informative", "INFORMATIVE", "informative"}) {
    map.set(raw, LabelTarget::kInformative);
  }
  for (const char* raw : {"NotInformative", "Not Informative", "not_informative", "UNINFORMATIVE",
                          "uninformative"}) {
    map.set(raw, LabelTarget::kNotInformative);
  }
  return map;
}

namespace {

// Collects errors while reading typed values out of the raw config.
class Reader {
 public:
  Reader(const RawConfig& raw, std::vector<std::string>& errors) : raw_(raw), errors_(errors) {}

  const RawConfig::Entry* find(const std::string& key) {
    used_.insert(key);
    const auto it = raw_.entries().find(key);
    return it == raw_.entries().end() ? nullptr : &it->second;
  }

  void error(const RawConfig::Entry& e, const std::string& key, const std::string& message) {
    errors_.push_back(e.origin + ": " + key + ": " + message);
  }

  void string(const std::string& key, std::string& out) {
    if (const auto* e = find(key)) out = e->value;
  }

  template <typename Int>
  void integer(const std::string& key, Int& out, std::uint64_t min_value = 0) {
    const auto* e = find(key);
    if (e == nullptr) return;
    std::uint64_t v = 0;
    if (!parse_uint64(e->value, v)) {
      error(*e, key, "expected a non-negative integer, got '" + e->value + "'");
    } else if (v < min_value) {
      error(*e, key, "must be at least " + std::to_string(min_value));
    } else {
      out = static_cast<Int>(v);
    }
  }

  void real(const std::string& key, double& out) {
    const auto* e = find(key);
    if (e == nullptr) return;
    double v = 0.0;
    if (!parse_double(e->value, v)) {
      error(*e, key, "expected a number, got '" + e->value + "'");
    } else {
      out = v;
    }
  }

  void boolean(const std::string& key, bool& out) {
    const auto* e = find(key);
    if (e == nullptr) return;
    const std::string v = to_lower_ascii(e->value);
    if (v == "true" || v == "yes" || v == "1") {
      out = true;
    } else if (v == "false" || v == "no" || v == "0") {
      out = false;
    } else {
      error(*e, key, "expected true or false, got '" + e->value + "'");
    }
  }

  // Resolves a path value and checks that the file exists.
  void path(const std::string& key, std::optional<std::filesystem::path>& out) {
    const auto* e = find(key);
    if (e == nullptr) return;
    std::filesystem::path p(e->value);
    if (p.is_relative()) p = e->base / p;
    if (e->value.empty()) {
      error(*e, key, "empty path");
    } else if (!std::filesystem::is_regular_file(p)) {
      error(*e, key, "file '" + p.string() + "' does not exist");
    } else {
      out = p;
    }
  }

  void directory(const std::string& key, std::filesystem::path& out) {
    const auto* e = find(key);
    if (e == nullptr) return;
    std::filesystem::path p(e->value);
    if (p.is_relative()) p = e->base / p;
    out = p;
  }

  void mark_prefix_used(const std::string& prefix) {
    for (const auto& [key, entry] : raw_.entries()) {
      if (key.starts_with(prefix)) used_.insert(key);
    }
  }

  void report_unknown() {
    for (const auto& [key, entry] : raw_.entries()) {
      if (!used_.contains(key)) errors_.push_back(entry.origin + ": unknown setting '" + key + "'");
    }
  }

  std::vector<std::string>& errors() { return errors_; }

 private:
  const RawConfig& raw_;
  std::vector<std::string>& errors_;
  std::set<std::string> used_;
};

void read_schema(Reader& r, RunConfig& c) {
  if (const auto* e = r.find("dataset.delimiter")) {
    const std::string v = to_lower_ascii(e->value);
    if (v == "tab" || v == "\\t") {
      c.schema.delimiter = '\t';
    } else if (v == "comma" || v == ",") {
      c.schema.delimiter = ',';
    } else if (e->value.size() == 1) {
      c.schema.delimiter = e->value.front();
    } else {
      r.error(*e, "dataset.delimiter", "expected tab, comma or a single character");
    }
  }
  r.string("dataset.id_column", c.schema.id_column);
  r.string("dataset.text_column", c.schema.text_column);
  r.string("dataset.label_column", c.schema.label_column);
  r.string("dataset.user_verified_column", c.schema.verified_column);
  r.string("dataset.user_followers_column", c.schema.followers_column);
  r.string("dataset.user_followees_column", c.schema.followees_column);
  r.string("dataset.user_tweets_column", c.schema.tweets_column);
  if (const auto* e = r.find("dataset.user_columns")) {
    const std::string v = to_lower_ascii(e->value);
    if (v == "auto") {
      c.schema.user_columns = UserColumns::kAuto;
    } else if (v == "required") {
      c.schema.user_columns = UserColumns::kRequired;
    } else if (v == "ignored" || v == "ignore") {
      c.schema.user_columns = UserColumns::kIgnored;
    } else {
      r.error(*e, "dataset.user_columns", "expected auto, required or ignored");
    }
  }
}

void read_labels(const RawConfig& raw, Reader& r, RunConfig& c) {
  bool any = false;
  for (const auto& [key, entry] : raw.entries()) {
    if (!key.starts_with("label.")) continue;
    any = true;
    const std::string label = key.substr(6);
    try {
      c.labels.set(label, LabelMap::parse_target(entry.value));
    } catch (const Error& e) {
      r.error(entry, key, e.what());
    }
  }
  r.mark_prefix_used("label.");
  if (!any) c.labels = default_label_map();
}

void read_model(const RawConfig& raw, Reader& r, RunConfig& c) {
  std::string kind = "lr";
  const auto* kind_entry = r.find("model.kind");
  if (kind_entry != nullptr) kind = kind_entry->value;
  if (kind == "hybrid") {
    c.pipeline.hybrid = true;
  } else {
    std::map<std::string, double> params;
    for (const auto& [key, entry] : raw.entries()) {
      if (!key.starts_with("model.") || key == "model.kind") continue;
      double v = 0.0;
      if (!parse_double(entry.value, v)) {
        r.error(entry, key, "expected a number, got '" + entry.value + "'");
        continue;
      }
      params[key.substr(6)] = v;
    }
    try {
      c.pipeline.model = ModelSpec(parse_model_kind(kind), params, c.seed);
    } catch (const Error& e) {
      if (kind_entry != nullptr) {
        r.error(*kind_entry, "model", e.what());
      } else {
        r.errors().push_back(std::string("model: ") + e.what());
      }
    }
  }
  r.mark_prefix_used("model.");
  if (!c.pipeline.hybrid) {
    for (const auto& [key, entry] : raw.entries()) {
      if (key.starts_with("hybrid.")) r.error(entry, key, "hybrid settings require model.kind = hybrid");
    }
    r.mark_prefix_used("hybrid.");
    return;
  }
  HybridConfig& hc = c.pipeline.hybrid_config;
  TrainSettings& ts = c.pipeline.hybrid_settings;
  r.integer("hybrid.handcrafted_width", hc.handcrafted_width, 1);
  r.integer("hybrid.encoder_width", hc.encoder_width, 1);
  if (const auto* e = r.find("hybrid.activation")) {
    if (e->value == "relu") {
      hc.activation = BranchActivation::kRelu;
    } else if (e->value == "identity") {
      hc.activation = BranchActivation::kIdentity;
    } else {
      r.error(*e, "hybrid.activation", "expected relu or identity");
    }
  }
  r.real("hybrid.learning_rate", ts.learning_rate);
  r.real("hybrid.momentum", ts.momentum);
  r.integer("hybrid.epochs", ts.epochs, 1);
  r.integer("hybrid.batch_size", ts.batch_size, 1);
  ts.seed = c.seed;
}

void default_lexicon(std::optional<std::filesystem::path>& path, const char* file) {
  if (path) return;
  const std::filesystem::path bundled = std::filesystem::path(INFOTWEET_BUNDLED_LEXICON_DIR) / file;
  if (std::filesystem::is_regular_file(bundled)) path = bundled;
}

}  // namespace

ConfigCheck interpret(const RawConfig& raw, Command command) {
  ConfigCheck check;
  RunConfig& c = check.config;
  Reader r(raw, check.errors);

  r.integer("seed", c.seed);
  r.integer("threads", c.threads, 1);
  r.directory("output.dir", c.out_dir);

  std::optional<std::filesystem::path> dataset;
  r.path("dataset.path", dataset);
  if (dataset) {
    c.dataset_path = *dataset;
  } else if (!raw.entries().contains("dataset.path")) {
    check.errors.emplace_back("dataset.path: required");
  }
  r.string("dataset.name", c.dataset_name);
  read_schema(r, c);
  read_labels(raw, r, c);

  r.path("resources.slang", c.slang_path);
  r.path("resources.interjections", c.interjections_path);
  r.path("resources.word_vectors", c.word_vectors_path);
  r.path("resources.sentence_vectors", c.sentence_vectors_path);
  default_lexicon(c.slang_path, "slang.txt");
  default_lexicon(c.interjections_path, "interjections.txt");

  if (const auto* e = r.find("features.set")) {
    try {
      c.pipeline.features = parse_feature_set(e->value);
    } catch (const Error& ex) {
      r.error(*e, "features.set", ex.what());
    }
  }
  r.integer("bow.min_count", c.pipeline.vocab.min_count);
  r.integer("bow.max_count", c.pipeline.vocab.max_count, 1);
  r.integer("bow.min_length", c.pipeline.vocab.min_length);
  if (const auto* e = r.find("bow.cap_mode")) {
    if (e->value == "occurrences") {
      c.pipeline.vocab.cap_mode = CapMode::kOccurrenceCap;
    } else if (e->value == "vocabulary") {
      c.pipeline.vocab.cap_mode = CapMode::kVocabularySize;
    } else {
      r.error(*e, "bow.cap_mode", "expected occurrences or vocabulary");
    }
  }
  r.boolean("bow.fold_safe", c.pipeline.fold_safe_vocab);

  read_model(raw, r, c);
  r.string("pipeline.name", c.pipeline.name);
  r.integer("cv.k", c.cv_k, 2);
  r.boolean("cv.stratified", c.cv_stratified);
  r.report_unknown();

  const bool needs_pipeline = command == Command::kTrain || command == Command::kCrossValidate;
  if (command == Command::kEmbed && !c.word_vectors_path && !raw.entries().contains("resources.word_vectors")) {
    check.errors.emplace_back("resources.word_vectors: required by the embed command");
  }
  if (needs_pipeline) {
    Resources presence;
    if (c.word_vectors_path || raw.entries().contains("resources.word_vectors")) {
      presence.word_vectors = WordVectorTable();
    }
    if (c.sentence_vectors_path || raw.entries().contains("resources.sentence_vectors")) {
      presence.sentence_vectors = SentenceVectorTable();
    }
    for (const std::string& p : c.pipeline.problems(presence)) check.errors.push_back("pipeline: " + p);
  }
  c.pipeline.model_threads = c.threads;
  return check;
}

}  // namespace infotweet::cli
