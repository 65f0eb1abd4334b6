#include "infotweet/feature_matrix.hpp"

#include <algorithm>
#include <cmath>

#include "infotweet/error.hpp"

namespace infotweet {

double FeatureRow::at(std::size_t column) const {
  if (column < dense.size()) return dense[column];
  const auto local = static_cast<std::uint32_t>(column - dense.size());
  const auto it = std::lower_bound(sparse_index.begin(), sparse_index.end(), local);
  if (it == sparse_index.end() || *it != local) return 0.0;
  return sparse_value[static_cast<std::size_t>(it - sparse_index.begin())];
}

FeatureMatrix::FeatureMatrix(std::size_t dense_cols, std::size_t sparse_cols, std::string layout)
    : dense_cols_(dense_cols), sparse_cols_(sparse_cols), layout_(std::move(layout)) {}

void FeatureMatrix::add_row(std::span<const double> dense) {
  add_row(dense, SparseVector{sparse_cols_, {}, {}});
}

void FeatureMatrix::add_row(std::span<const double> dense, const SparseVector& sparse) {
  if (dense.size() != dense_cols_) {
    throw DimensionError("row has " + std::to_string(dense.size()) + " dense values, matrix has " +
                         std::to_string(dense_cols_));
  }
  if (sparse.dimension != sparse_cols_) {
    throw DimensionError("row has sparse dimension " + std::to_string(sparse.dimension) +
                         ", matrix has " + std::to_string(sparse_cols_));
  }
  for (const double v : dense) {
    if (!std::isfinite(v)) throw DataError("non-finite feature value in row " + std::to_string(rows_));
  }
  for (const double v : sparse.values) {
    if (!std::isfinite(v)) throw DataError("non-finite feature value in row " + std::to_string(rows_));
  }
  dense_.insert(dense_.end(), dense.begin(), dense.end());
  index_.insert(index_.end(), sparse.indices.begin(), sparse.indices.end());
  value_.insert(value_.end(), sparse.values.begin(), sparse.values.end());
  offsets_.push_back(index_.size());
  ++rows_;
}

FeatureRow FeatureMatrix::row(std::size_t i) const {
  const std::size_t begin = offsets_[i];
  const std::size_t end = offsets_[i + 1];
  return FeatureRow{
      std::span<const double>(dense_).subspan(i * dense_cols_, dense_cols_),
      std::span<const std::uint32_t>(index_).subspan(begin, end - begin),
      std::span<const double>(value_).subspan(begin, end - begin),
      sparse_cols_,
  };
}

FeatureMatrix FeatureMatrix::select(std::span<const std::size_t> rows) const {
  FeatureMatrix out(dense_cols_, sparse_cols_, layout_);
  out.dense_.reserve(rows.size() * dense_cols_);
  for (const std::size_t r : rows) {
    const FeatureRow src = row(r);
    out.dense_.insert(out.dense_.end(), src.dense.begin(), src.dense.end());
    out.index_.insert(out.index_.end(), src.sparse_index.begin(), src.sparse_index.end());
    out.value_.insert(out.value_.end(), src.sparse_value.begin(), src.sparse_value.end());
    out.offsets_.push_back(out.index_.size());
    ++out.rows_;
  }
  return out;
}

Standardizer::Standardizer(std::vector<double> mean, std::vector<double> scale)
    : mean_(std::move(mean)), scale_(std::move(scale)) {
  if (mean_.size() != scale_.size()) throw DimensionError("standardizer mean/scale size mismatch");
}

Standardizer Standardizer::fit(const FeatureMatrix& matrix) {
  const std::size_t d = matrix.dense_cols();
  std::vector<double> mean(d, 0.0);
  std::vector<double> scale(d, 1.0);
  const std::size_t n = matrix.rows();
  if (n == 0) return Standardizer(std::move(mean), std::move(scale));
  const auto data = matrix.dense_data();
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) mean[c] += data[r * d + c];
  }
  for (double& m : mean) m /= static_cast<double>(n);
  std::vector<double> var(d, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      const double diff = data[r * d + c] - mean[c];
      var[c] += diff * diff;
    }
  }
  for (std::size_t c = 0; c < d; ++c) {
    const double sd = std::sqrt(var[c] / static_cast<double>(n));
    scale[c] = sd > 0.0 ? sd : 1.0;
  }
  return Standardizer(std::move(mean), std::move(scale));
}

void Standardizer::apply_in_place(FeatureMatrix& matrix) const {
  if (matrix.dense_cols() != mean_.size()) {
    throw DimensionError("standardizer fitted on " + std::to_string(mean_.size()) +
                         " columns, matrix has " + std::to_string(matrix.dense_cols()));
  }
  auto data = matrix.mutable_dense_data();
  const std::size_t d = mean_.size();
  for (std::size_t i = 0; i < data.size(); ++i) {
    const std::size_t c = i % d;
    data[i] = (data[i] - mean_[c]) / scale_[c];
  }
}

void Standardizer::apply(std::span<const double> in, std::span<double> out) const {
  if (in.size() != mean_.size() || out.size() != mean_.size()) {
    throw DimensionError("standardizer dimension mismatch");
  }
  for (std::size_t c = 0; c < in.size(); ++c) out[c] = (in[c] - mean_[c]) / scale_[c];
}

}  // namespace infotweet
