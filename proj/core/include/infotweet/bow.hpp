#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "infotweet/textproc.hpp"

namespace infotweet {

struct SparseVector {
  std::size_t dimension = 0;
  std::vector<std::uint32_t> indices;  // strictly increasing
  std::vector<double> values;

  std::size_t nnz() const { return indices.size(); }
  double norm() const;
};

enum class CapMode {
  kOccurrenceCap,   // drop terms occurring more than max_count times in the corpus
  kVocabularySize,  // keep at most max_count terms, most frequent first
};

struct VocabOptions {
  std::size_t min_count = 5;
  std::size_t max_count = 10000;
  std::size_t min_length = 2;
  CapMode cap_mode = CapMode::kOccurrenceCap;
};

class Vocabulary {
 public:
  struct Entry {
    std::string term;
    std::size_t document_frequency = 0;
    double idf = 0.0;
  };

  Vocabulary() = default;
  Vocabulary(std::size_t corpus_size, std::vector<Entry> entries);

  std::size_t size() const { return entries_.size(); }
  std::size_t corpus_size() const { return corpus_size_; }
  const std::vector<Entry>& entries() const { return entries_; }
  const Entry& entry(std::size_t index) const { return entries_[index]; }
  std::optional<std::size_t> index_of(const std::string& term) const;

  // "#docs=N" header, then "term<TAB>df<TAB>idf" per term in index order.
  void write(std::ostream& out) const;
  static Vocabulary read(std::istream& in);

 private:
  std::size_t corpus_size_ = 0;
  std::vector<Entry> entries_;  // sorted by term
  std::unordered_map<std::string, std::size_t> index_;
};

// idf(t) = ln((1 + N) / (1 + df(t))) + 1. Terms are indexed in lexicographic
// order. Throws DataError when the corpus is empty or every term is pruned.
Vocabulary build_vocab(std::span<const TokenList> corpus, const VocabOptions& options = {});

// Raw term counts times idf, L2-normalized. Out-of-vocabulary tokens are
// ignored; a document with none left maps to the zero vector.
SparseVector tfidf_transform(std::span<const std::string> tokens, const Vocabulary& vocab);

}  // namespace infotweet
