#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace infotweet {

struct NamedBlock {
  std::string name;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;  // row-major
};

// Self-describing text container shared by every trained model:
//
//   infotweet-model 1
//   <key> <value>            header entries, in insertion order
//   block <name> <rows> <cols>
//   <cols values>            one line per row, 17 significant digits
//   end
class ModelContainer {
 public:
  void set(std::string key, std::string value);
  const std::string& get(const std::string& key) const;  // throws ParseError when absent
  bool has(const std::string& key) const;
  const std::vector<std::pair<std::string, std::string>>& header() const { return header_; }

  void add_block(std::string name, std::size_t rows, std::size_t cols, std::vector<double> values);
  void add_vector(std::string name, std::span<const double> values);
  const NamedBlock& block(const std::string& name) const;  // throws ParseError when absent
  // Block data checked against the expected shape.
  const std::vector<double>& values(const std::string& name, std::size_t rows,
                                    std::size_t cols) const;
  const std::vector<NamedBlock>& blocks() const { return blocks_; }

  void write(std::ostream& out) const;
  static ModelContainer read(std::istream& in);

 private:
  std::vector<std::pair<std::string, std::string>> header_;
  std::vector<NamedBlock> blocks_;
};

}  // namespace infotweet
