#include "infotweet/bow.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <unordered_set>

#include "infotweet/error.hpp"
#include "infotweet/strings.hpp"

namespace infotweet {

double SparseVector::norm() const {
  double sum = 0.0;
  for (const double v : values) sum += v * v;
  return std::sqrt(sum);
}

Vocabulary::Vocabulary(std::size_t corpus_size, std::vector<Entry> entries)
    : corpus_size_(corpus_size), entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(),
            [](const Entry& a, const Entry& b) { return a.term < b.term; });
  index_.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!index_.emplace(entries_[i].term, i).second) {
      throw DataError("duplicate vocabulary term: " + entries_[i].term);
    }
  }
}

std::optional<std::size_t> Vocabulary::index_of(const std::string& term) const {
  const auto it = index_.find(term);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void Vocabulary::write(std::ostream& out) const {
  out << "#docs=" << corpus_size_ << '\n';
  for (const Entry& e : entries_) {
    out << e.term << '\t' << e.document_frequency << '\t' << format_significant(e.idf, 17) << '\n';
  }
}

Vocabulary Vocabulary::read(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || !line.starts_with("#docs=")) {
    throw ParseError("vocabulary file must start with '#docs=N'");
  }
  std::uint64_t docs = 0;
  if (!parse_uint64(std::string_view(line).substr(6), docs)) {
    throw ParseError("bad vocabulary header: " + line);
  }
  std::vector<Entry> entries;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split(line, '\t');
    std::uint64_t df = 0;
    double idf = 0.0;
    if (fields.size() != 3 || !parse_uint64(fields[1], df) || !parse_double(fields[2], idf)) {
      throw ParseError("vocabulary line " + std::to_string(line_no) + " is malformed");
    }
    entries.push_back({std::string(fields[0]), static_cast<std::size_t>(df), idf});
  }
  return Vocabulary(static_cast<std::size_t>(docs), std::move(entries));
}

Vocabulary build_vocab(std::span<const TokenList> corpus, const VocabOptions& options) {
  if (corpus.empty()) throw DataError("cannot build a vocabulary from an empty corpus");

  struct Stats {
    std::size_t count = 0;
    std::size_t df = 0;
  };
  std::map<std::string, Stats, std::less<>> stats;
  for (const TokenList& doc : corpus) {
    std::unordered_set<std::string_view> seen;
    for (const std::string& token : doc) {
      Stats& s = stats[token];
      ++s.count;
      if (seen.insert(token).second) ++s.df;
    }
  }

  std::vector<std::pair<const std::string*, Stats>> kept;
  for (const auto& [term, s] : stats) {
    if (term.size() < options.min_length || s.count < options.min_count) continue;
    if (options.cap_mode == CapMode::kOccurrenceCap && s.count > options.max_count) continue;
    kept.emplace_back(&term, s);
  }
  if (options.cap_mode == CapMode::kVocabularySize && kept.size() > options.max_count) {
    std::stable_sort(kept.begin(), kept.end(),
                     [](const auto& a, const auto& b) { return a.second.count > b.second.count; });
    kept.resize(options.max_count);
  }
  if (kept.empty()) throw DataError("every term was pruned; vocabulary is empty");

  const double n = static_cast<double>(corpus.size());
  std::vector<Vocabulary::Entry> entries;
  entries.reserve(kept.size());
  for (const auto& [term, s] : kept) {
    const double idf = std::log((1.0 + n) / (1.0 + static_cast<double>(s.df))) + 1.0;
    entries.push_back({*term, s.df, idf});
  }
  return Vocabulary(corpus.size(), std::move(entries));
}

SparseVector tfidf_transform(std::span<const std::string> tokens, const Vocabulary& vocab) {
  std::map<std::size_t, std::size_t> counts;
  for (const std::string& token : tokens) {
    if (const auto index = vocab.index_of(token)) ++counts[*index];
  }
  SparseVector out;
  out.dimension = vocab.size();
  out.indices.reserve(counts.size());
  out.values.reserve(counts.size());
  double sum_sq = 0.0;
  for (const auto& [index, count] : counts) {
    const double w = static_cast<double>(count) * vocab.entry(index).idf;
    out.indices.push_back(static_cast<std::uint32_t>(index));
    out.values.push_back(w);
    sum_sq += w * w;
  }
  if (sum_sq > 0.0) {
    const double inv = 1.0 / std::sqrt(sum_sq);
    for (double& v : out.values) v *= inv;
  }
  return out;
}

}  // namespace infotweet
