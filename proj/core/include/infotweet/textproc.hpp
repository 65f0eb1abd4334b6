#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace infotweet {

// Lower-cased ASCII text with punctuation mapped to single spaces and every
// non-ASCII byte removed. Only normalize() produces one.
class NormalizedText {
 public:
  NormalizedText() = default;
  const std::string& str() const { return text_; }
  bool empty() const { return text_.empty(); }

 private:
  friend NormalizedText normalize(std::string_view raw);
  explicit NormalizedText(std::string text) : text_(std::move(text)) {}
  std::string text_;
};

using TokenList = std::vector<std::string>;

struct PatternCounts {
  std::size_t hashtags = 0;
  std::size_t mentions = 0;
  std::size_t urls = 0;
  bool is_retweet = false;

  friend bool operator==(const PatternCounts&, const PatternCounts&) = default;
};

// Counts '#'/'@' directly followed by an ASCII letter or digit, and
// case-insensitive "http://" / "https://" occurrences. A post is a retweet
// when it starts with "rt @" or "rt@", or when a standalone "rt" is followed
// (optionally after whitespace) by a mention. Must run on raw text:
// normalization strips the symbols counted here.
PatternCounts detect_patterns(std::string_view raw);

NormalizedText normalize(std::string_view raw);

// Splits on single spaces; never yields empty tokens.
TokenList tokenize(const NormalizedText& text);

// Removes every URL (scheme up to the next whitespace).
std::string strip_urls(std::string_view raw);

// Word tokens used by every feature family: URLs removed, then normalized,
// then tokenized.
TokenList analyze(std::string_view raw);

// Number of UTF-8 code points (continuation bytes are not counted).
std::size_t count_code_points(std::string_view utf8);

enum class LexiconKind { kSlang, kInterjection };

class Lexicon {
 public:
  Lexicon(LexiconKind kind, std::span<const std::string> terms);

  // One term per line; blank lines and lines starting with '#' are skipped.
  // Terms are normalized on load. An entry that normalizes to more than one
  // word, or a file with no terms, is a ParseError.
  static Lexicon load(const std::filesystem::path& path, LexiconKind kind);

  LexiconKind kind() const { return kind_; }
  std::size_t size() const { return entries_.size(); }
  bool contains(std::string_view token) const;

 private:
  LexiconKind kind_;
  std::unordered_set<std::string> entries_;
};

bool contains_lexicon_term(std::span<const std::string> tokens, const Lexicon& lexicon);

}  // namespace infotweet
