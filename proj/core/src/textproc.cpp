#include "infotweet/textproc.hpp"

#include <fstream>

#include "infotweet/error.hpp"
#include "infotweet/strings.hpp"

namespace infotweet {

namespace {

bool is_ascii_alnum(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

char lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

// Length of the URL scheme ("http://" or "https://") starting at pos, or 0.
std::size_t scheme_length_at(std::string_view text, std::size_t pos) {
  static constexpr std::string_view kHttp = "http://";
  static constexpr std::string_view kHttps = "https://";
  auto matches = [&](std::string_view scheme) {
    if (pos + scheme.size() > text.size()) return false;
    for (std::size_t i = 0; i < scheme.size(); ++i) {
      if (lower(text[pos + i]) != scheme[i]) return false;
    }
    return true;
  };
  if (matches(kHttps)) return kHttps.size();
  if (matches(kHttp)) return kHttp.size();
  return 0;
}

bool mention_at(std::string_view text, std::size_t pos) {
  return pos + 1 < text.size() && text[pos] == '@' && is_ascii_alnum(text[pos + 1]);
}

bool detect_retweet(std::string_view raw) {
  const std::string text = to_lower_ascii(raw);
  std::size_t start = 0;
  while (start < text.size() && is_ascii_space(text[start])) ++start;
  const std::string_view body = std::string_view(text).substr(start);
  if (body.starts_with("rt @") || body.starts_with("rt@")) return true;

  for (std::size_t pos = text.find("rt"); pos != std::string::npos; pos = text.find("rt", pos + 1)) {
    if (pos > 0 && is_ascii_alnum(text[pos - 1])) continue;
    std::size_t next = pos + 2;
    while (next < text.size() && is_ascii_space(text[next])) ++next;
    if (mention_at(text, next)) return true;
  }
  return false;
}

}  // namespace

PatternCounts detect_patterns(std::string_view raw) {
  PatternCounts counts;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const char c = raw[i];
    if (c == '#' && i + 1 < raw.size() && is_ascii_alnum(raw[i + 1])) ++counts.hashtags;
    if (mention_at(raw, i)) ++counts.mentions;
    if ((c == 'h' || c == 'H') && scheme_length_at(raw, i) > 0) ++counts.urls;
  }
  counts.is_retweet = detect_retweet(raw);
  return counts;
}

NormalizedText normalize(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (const char c : raw) {
    const auto byte = static_cast<unsigned char>(c);
    if (byte >= 0x80) continue;
    if (is_ascii_alnum(c)) {
      if (pending_space && !out.empty()) out.push_back(' ');
      pending_space = false;
      out.push_back(lower(c));
    } else {
      // Punctuation, whitespace and control characters all separate words.
      pending_space = true;
    }
  }
  return NormalizedText(std::move(out));
}

TokenList tokenize(const NormalizedText& text) {
  TokenList tokens;
  for (const std::string_view part : split(text.str(), ' ')) {
    if (!part.empty()) tokens.emplace_back(part);
  }
  return tokens;
}

std::string strip_urls(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  std::size_t i = 0;
  while (i < raw.size()) {
    if (scheme_length_at(raw, i) > 0) {
      while (i < raw.size() && !is_ascii_space(raw[i])) ++i;
      out.push_back(' ');
      continue;
    }
    out.push_back(raw[i]);
    ++i;
  }
  return out;
}

TokenList analyze(std::string_view raw) { return tokenize(normalize(strip_urls(raw))); }

std::size_t count_code_points(std::string_view utf8) {
  std::size_t count = 0;
  for (const char c : utf8) {
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++count;
  }
  return count;
}

Lexicon::Lexicon(LexiconKind kind, std::span<const std::string> terms) : kind_(kind) {
  for (const std::string& term : terms) {
    const TokenList words = tokenize(normalize(term));
    if (words.size() == 1) entries_.insert(words.front());
  }
}

Lexicon Lexicon::load(const std::filesystem::path& path, LexiconKind kind) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open lexicon file: " + path.string());
  std::vector<std::string> terms;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view entry = trim(line);
    if (entry.empty() || entry.front() == '#') continue;
    const TokenList words = tokenize(normalize(entry));
    if (words.size() != 1) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                       ": lexicon entry must be a single word: '" + std::string(entry) + "'");
    }
    terms.push_back(words.front());
  }
  if (terms.empty()) throw ParseError("lexicon file has no terms: " + path.string());
  return Lexicon(kind, terms);
}

bool Lexicon::contains(std::string_view token) const {
  return entries_.find(std::string(token)) != entries_.end();
}

bool contains_lexicon_term(std::span<const std::string> tokens, const Lexicon& lexicon) {
  for (const std::string& token : tokens) {
    if (lexicon.contains(token)) return true;
  }
  return false;
}

}  // namespace infotweet
