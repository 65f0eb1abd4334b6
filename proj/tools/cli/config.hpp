#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "infotweet/corpus.hpp"
#include "infotweet/pipeline.hpp"

namespace infotweet::cli {

// Flat "key = value" settings; '#' starts a comment line. Later entries and
// overrides replace earlier ones.
class RawConfig {
 public:
  struct Entry {
    std::string value;
    std::string origin;           // "file:line" or the flag that set it
    std::filesystem::path base;   // relative paths in the value resolve here
  };

  // Throws ConfigError on a line without '='.
  static RawConfig parse(std::string_view text, const std::string& source,
                         std::filesystem::path base_dir);
  static RawConfig load(const std::filesystem::path& path);

  void set(const std::string& key, std::string value, std::string origin,
           std::filesystem::path base = ".");
  const std::map<std::string, Entry>& entries() const { return entries_; }

 private:
  std::map<std::string, Entry> entries_;
};

enum class Command { kFeaturize, kBuildVocab, kEmbed, kTrain, kCrossValidate };

struct RunConfig {
  std::filesystem::path dataset_path;
  std::string dataset_name;
  Schema schema;
  LabelMap labels;
  std::optional<std::filesystem::path> slang_path;
  std::optional<std::filesystem::path> interjections_path;
  std::optional<std::filesystem::path> word_vectors_path;
  std::optional<std::filesystem::path> sentence_vectors_path;
  PipelineSpec pipeline;
  std::size_t cv_k = 10;
  bool cv_stratified = false;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::filesystem::path out_dir = ".";
};

struct ConfigCheck {
  RunConfig config;
  std::vector<std::string> errors;  // every problem found, in key order
};

// Interprets and validates the settings a command needs, including that
// every referenced file exists. Nothing is loaded.
ConfigCheck interpret(const RawConfig& raw, Command command);

// Label names accepted when the config maps none explicitly.
LabelMap default_label_map();

}  // namespace infotweet::cli
