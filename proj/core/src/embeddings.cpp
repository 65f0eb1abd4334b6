#include "infotweet/embeddings.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "infotweet/error.hpp"
#include "infotweet/strings.hpp"

namespace infotweet {

namespace {

std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> parts;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) parts.push_back(line.substr(start, i - start));
  }
  return parts;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

void WordVectorTable::add(std::string term, std::span<const double> vector) {
  if (dimension_ == 0) dimension_ = vector.size();
  if (vector.size() != dimension_) {
    throw DimensionError("vector for '" + term + "' has dimension " +
                         std::to_string(vector.size()) + ", table has " +
                         std::to_string(dimension_));
  }
  if (!index_.emplace(std::move(term), index_.size()).second) {
    throw DataError("duplicate term in word-vector table");
  }
  data_.insert(data_.end(), vector.begin(), vector.end());
}

const double* WordVectorTable::find(std::string_view term) const {
  const auto it = index_.find(std::string(term));
  if (it == index_.end()) return nullptr;
  return data_.data() + it->second * dimension_;
}

WordVectorTable parse_word_vectors(std::istream& in, const std::string& source) {
  WordVectorTable table;
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    const auto parts = split_spaces(line);
    if (parts.empty()) continue;
    if (line_no == 1 && parts.size() == 2) {
      std::uint64_t a = 0;
      std::uint64_t b = 0;
      if (parse_uint64(parts[0], a) && parse_uint64(parts[1], b)) continue;
    }
    if (parts.size() < 2) {
      throw ParseError(source + ":" + std::to_string(line_no) + ": line has no vector values");
    }
    values.clear();
    for (std::size_t i = 1; i < parts.size(); ++i) {
      double v = 0.0;
      if (!parse_double(parts[i], v)) {
        throw ParseError(source + ":" + std::to_string(line_no) + ": bad number '" +
                         std::string(parts[i]) + "'");
      }
      values.push_back(v);
    }
    if (table.size() > 0 && values.size() != table.dimension()) {
      throw DimensionError(source + ":" + std::to_string(line_no) + ": expected dimension " +
                           std::to_string(table.dimension()) + ", found " +
                           std::to_string(values.size()));
    }
    try {
      table.add(std::string(parts[0]), values);
    } catch (const DataError&) {
      throw DataError(source + ":" + std::to_string(line_no) + ": duplicate term '" +
                      std::string(parts[0]) + "'");
    }
  }
  if (table.size() == 0) throw ParseError(source + ": word-vector file is empty");
  return table;
}

WordVectorTable load_word_vectors(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open word-vector file: " + path.string());
  return parse_word_vectors(in, path.string());
}

DenseVector average_embed(std::span<const std::string> tokens, const WordVectorTable& table) {
  DenseVector sum(table.dimension(), 0.0);
  std::size_t found = 0;
  for (const std::string& token : tokens) {
    const double* v = table.find(token);
    if (v == nullptr) continue;
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += v[i];
    ++found;
  }
  if (found > 0) {
    const double inv = 1.0 / static_cast<double>(found);
    for (double& x : sum) x *= inv;
  }
  return sum;
}

void SentenceVectorTable::add(std::string id, std::span<const double> vector) {
  if (vector.size() != dimension_) {
    throw DimensionError("sentence vector for '" + id + "' has dimension " +
                         std::to_string(vector.size()) + ", expected " +
                         std::to_string(dimension_));
  }
  if (index_.count(id) > 0) throw DataError("duplicate sentence-vector id: " + id);
  index_.emplace(id, ids_.size());
  ids_.push_back(std::move(id));
  data_.insert(data_.end(), vector.begin(), vector.end());
}

const double* SentenceVectorTable::find(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) return nullptr;
  return data_.data() + it->second * dimension_;
}

std::span<const double> SentenceVectorTable::at(std::string_view id) const {
  const double* v = find(id);
  if (v == nullptr) throw DataError("no sentence vector for record id '" + std::string(id) + "'");
  return {v, dimension_};
}

SentenceVectorTable parse_sentence_vectors(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("sentence-vector file is empty");
  strip_cr(line);
  std::uint64_t dim = 0;
  std::uint64_t count = 0;
  {
    const auto parts = split_spaces(line);
    if (parts.size() != 2 || !parts[0].starts_with("#dim=") || !parts[1].starts_with("count=") ||
        !parse_uint64(parts[0].substr(5), dim) || !parse_uint64(parts[1].substr(6), count) ||
        dim == 0) {
      throw ParseError("sentence-vector header must be '#dim=D count=N', got '" + line + "'");
    }
  }
  SentenceVectorTable table(static_cast<std::size_t>(dim));
  std::vector<double> values;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty() || line.front() == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw ParseError("sentence-vector line " + std::to_string(line_no) +
                       ": expected 'id<TAB>values'");
    }
    const std::string id = line.substr(0, tab);
    const auto parts = split_spaces(std::string_view(line).substr(tab + 1));
    values.clear();
    for (const std::string_view part : parts) {
      double v = 0.0;
      if (!parse_double(part, v)) {
        throw ParseError("sentence-vector row '" + id + "': bad number '" + std::string(part) + "'");
      }
      values.push_back(v);
    }
    if (values.size() != dim) {
      throw ParseError("sentence-vector row '" + id + "' has " + std::to_string(values.size()) +
                       " values, header declares dim=" + std::to_string(dim));
    }
    table.add(id, values);
  }
  if (table.size() != count) {
    throw ParseError("sentence-vector header declares count=" + std::to_string(count) +
                     " but file has " + std::to_string(table.size()) + " rows");
  }
  return table;
}

SentenceVectorTable load_sentence_vectors(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open sentence-vector file: " + path.string());
  return parse_sentence_vectors(in);
}

namespace {

// Six decimals bound the round-trip error by 5e-7 at any magnitude; trailing
// zeros are dropped to keep rows short.
std::string interchange_float(double v) {
  std::string s = format_fixed(v, 6);
  const std::size_t dot = s.find('.');
  if (dot != std::string::npos) {
    std::size_t end = s.find_last_not_of('0');
    if (end == dot) --end;
    s.erase(end + 1);
  }
  if (s == "-0") s = "0";
  return s;
}

}  // namespace

void write_sentence_vectors(const SentenceVectorTable& table, std::ostream& out) {
  out << "#dim=" << table.dimension() << " count=" << table.size() << '\n';
  for (const std::string& id : table.ids()) {
    out << id << '\t';
    const auto v = table.at(id);
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i > 0) out << ' ';
      out << interchange_float(v[i]);
    }
    out << '\n';
  }
}

}  // namespace infotweet
