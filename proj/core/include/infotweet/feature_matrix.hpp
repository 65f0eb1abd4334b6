#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "infotweet/bow.hpp"
#include "infotweet/corpus.hpp"

namespace infotweet {

// One row: a dense block (handcrafted / embedding columns) followed by a
// sparse block (TF-IDF columns). Column j of the sparse block is overall
// column dense.size() + j.
struct FeatureRow {
  std::span<const double> dense;
  std::span<const std::uint32_t> sparse_index;
  std::span<const double> sparse_value;
  std::size_t sparse_dim = 0;

  std::size_t dim() const { return dense.size() + sparse_dim; }
  double at(std::size_t column) const;

  static FeatureRow from_dense(std::span<const double> values) { return {values, {}, {}, 0}; }
};

class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t dense_cols, std::size_t sparse_cols, std::string layout = {});

  // Throws DimensionError on width mismatch, DataError naming the row on a
  // non-finite value.
  void add_row(std::span<const double> dense);
  void add_row(std::span<const double> dense, const SparseVector& sparse);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return dense_cols_ + sparse_cols_; }
  std::size_t dense_cols() const { return dense_cols_; }
  std::size_t sparse_cols() const { return sparse_cols_; }
  const std::string& layout() const { return layout_; }
  void set_layout(std::string layout) { layout_ = std::move(layout); }

  FeatureRow row(std::size_t i) const;
  double at(std::size_t r, std::size_t c) const { return row(r).at(c); }

  // Dense-block values, row-major (rows x dense_cols).
  std::span<const double> dense_data() const { return dense_; }
  std::span<double> mutable_dense_data() { return dense_; }

  FeatureMatrix select(std::span<const std::size_t> rows) const;

 private:
  std::size_t rows_ = 0;
  std::size_t dense_cols_ = 0;
  std::size_t sparse_cols_ = 0;
  std::string layout_;
  std::vector<double> dense_;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::uint32_t> index_;
  std::vector<double> value_;
};

// Zero-mean / unit-variance scaling of the dense block. Columns with zero
// variance get scale 1.
class Standardizer {
 public:
  Standardizer() = default;
  Standardizer(std::vector<double> mean, std::vector<double> scale);

  static Standardizer fit(const FeatureMatrix& matrix);

  bool empty() const { return mean_.empty(); }
  const std::vector<double>& mean() const { return mean_; }
  const std::vector<double>& scale() const { return scale_; }

  void apply_in_place(FeatureMatrix& matrix) const;
  void apply(std::span<const double> in, std::span<double> out) const;

 private:
  std::vector<double> mean_;
  std::vector<double> scale_;
};

// Label 1.0 for Informative, 0.0 otherwise.
inline double positive_target(Label label) { return label == Label::kInformative ? 1.0 : 0.0; }

}  // namespace infotweet
