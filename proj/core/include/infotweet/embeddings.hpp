#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace infotweet {

using DenseVector = std::vector<double>;

// Term -> vector table with one shared dimension.
class WordVectorTable {
 public:
  WordVectorTable() = default;
  explicit WordVectorTable(std::size_t dimension) : dimension_(dimension) {}

  void add(std::string term, std::span<const double> vector);
  const double* find(std::string_view term) const;  // nullptr when absent
  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return index_.size(); }

 private:
  std::size_t dimension_ = 0;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> data_;
};

// Whitespace-separated "term f1 ... fd" per line. A leading "count dim"
// line (as in .vec releases) is skipped.
WordVectorTable load_word_vectors(const std::filesystem::path& path);
WordVectorTable parse_word_vectors(std::istream& in, const std::string& source = "<stream>");

// Mean of the vectors of tokens found in the table; zero vector when none are.
DenseVector average_embed(std::span<const std::string> tokens, const WordVectorTable& table);

// Record id -> encoder sentence vector.
class SentenceVectorTable {
 public:
  SentenceVectorTable() = default;
  explicit SentenceVectorTable(std::size_t dimension) : dimension_(dimension) {}

  void add(std::string id, std::span<const double> vector);
  const double* find(std::string_view id) const;
  std::span<const double> at(std::string_view id) const;  // throws DataError when absent
  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return ids_.size(); }
  const std::vector<std::string>& ids() const { return ids_; }

 private:
  std::size_t dimension_ = 0;
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> data_;
};

// Interchange format: first line "#dim=D count=N", further '#' lines are
// comments, then "id<TAB>f1 f2 ... fD" rows with LF endings.
SentenceVectorTable load_sentence_vectors(const std::filesystem::path& path);
SentenceVectorTable parse_sentence_vectors(std::istream& in);
// Floats are written with 6 decimals, trailing zeros dropped.
void write_sentence_vectors(const SentenceVectorTable& table, std::ostream& out);

}  // namespace infotweet
