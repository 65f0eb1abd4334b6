#include "infotweet/model_io.hpp"

#include <istream>
#include <ostream>

#include "infotweet/error.hpp"
#include "infotweet/strings.hpp"

namespace infotweet {

namespace {
constexpr std::string_view kMagic = "infotweet-model 1";
}

void ModelContainer::set(std::string key, std::string value) {
  if (key.empty() || key.find_first_of(" \t\n") != std::string::npos || key == "block" ||
      key == "end") {
    throw Error("invalid model header key: '" + key + "'");
  }
  if (value.find('\n') != std::string::npos) throw Error("model header value contains newline");
  for (auto& entry : header_) {
    if (entry.first == key) {
      entry.second = std::move(value);
      return;
    }
  }
  header_.emplace_back(std::move(key), std::move(value));
}

bool ModelContainer::has(const std::string& key) const {
  for (const auto& entry : header_) {
    if (entry.first == key) return true;
  }
  return false;
}

const std::string& ModelContainer::get(const std::string& key) const {
  for (const auto& entry : header_) {
    if (entry.first == key) return entry.second;
  }
  throw ParseError("model file has no header entry '" + key + "'");
}

void ModelContainer::add_block(std::string name, std::size_t rows, std::size_t cols,
                               std::vector<double> values) {
  if (values.size() != rows * cols) throw DimensionError("block " + name + " shape mismatch");
  blocks_.push_back({std::move(name), rows, cols, std::move(values)});
}

void ModelContainer::add_vector(std::string name, std::span<const double> values) {
  add_block(std::move(name), 1, values.size(), std::vector<double>(values.begin(), values.end()));
}

const NamedBlock& ModelContainer::block(const std::string& name) const {
  for (const NamedBlock& b : blocks_) {
    if (b.name == name) return b;
  }
  throw ParseError("model file has no block '" + name + "'");
}

const std::vector<double>& ModelContainer::values(const std::string& name, std::size_t rows,
                                                  std::size_t cols) const {
  const NamedBlock& b = block(name);
  if (b.rows != rows || b.cols != cols) {
    throw ParseError("block " + name + " has shape " + std::to_string(b.rows) + "x" +
                     std::to_string(b.cols) + ", expected " + std::to_string(rows) + "x" +
                     std::to_string(cols));
  }
  return b.values;
}

void ModelContainer::write(std::ostream& out) const {
  out << kMagic << '\n';
  for (const auto& [key, value] : header_) out << key << ' ' << value << '\n';
  for (const NamedBlock& b : blocks_) {
    out << "block " << b.name << ' ' << b.rows << ' ' << b.cols << '\n';
    for (std::size_t r = 0; r < b.rows; ++r) {
      for (std::size_t c = 0; c < b.cols; ++c) {
        if (c > 0) out << ' ';
        out << format_significant(b.values[r * b.cols + c], 17);
      }
      out << '\n';
    }
  }
  out << "end\n";
}

ModelContainer ModelContainer::read(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != kMagic) {
    throw ParseError("not a model file (missing '" + std::string(kMagic) + "' header)");
  }
  ModelContainer container;
  bool ended = false;
  while (std::getline(in, line)) {
    const std::string_view text = trim(line);
    if (text.empty()) continue;
    if (text == "end") {
      ended = true;
      break;
    }
    if (text.starts_with("block ")) {
      const auto parts = split(text, ' ');
      std::uint64_t rows = 0;
      std::uint64_t cols = 0;
      if (parts.size() != 4 || !parse_uint64(parts[2], rows) || !parse_uint64(parts[3], cols)) {
        throw ParseError("malformed block header: " + std::string(text));
      }
      // parts view into `line`, which the row reads below overwrite.
      const std::string name(parts[1]);
      std::vector<double> values;
      values.reserve(rows * cols);
      for (std::uint64_t r = 0; r < rows; ++r) {
        if (!std::getline(in, line)) throw ParseError("truncated block " + name);
        const std::string_view row_text = trim(line);
        const auto fields = row_text.empty() ? std::vector<std::string_view>{} : split(row_text, ' ');
        if (fields.size() != cols) {
          throw ParseError("block " + name + " row " + std::to_string(r) +
                           " has " + std::to_string(fields.size()) + " values, expected " +
                           std::to_string(cols));
        }
        for (const std::string_view f : fields) {
          double v = 0.0;
          if (!parse_double(f, v)) throw ParseError("bad number in block " + name);
          values.push_back(v);
        }
      }
      container.add_block(name, rows, cols, std::move(values));
      continue;
    }
    const std::size_t space = text.find(' ');
    if (space == std::string_view::npos) {
      container.set(std::string(text), "");
    } else {
      container.set(std::string(text.substr(0, space)), std::string(text.substr(space + 1)));
    }
  }
  if (!ended) throw ParseError("model file is truncated (no 'end' line)");
  return container;
}

}  // namespace infotweet
