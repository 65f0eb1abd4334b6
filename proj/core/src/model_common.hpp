#pragma once

#include <string>
#include <vector>

#include "infotweet/error.hpp"
#include "infotweet/feature_matrix.hpp"
#include "infotweet/model_io.hpp"
#include "infotweet/strings.hpp"

namespace infotweet::detail {

struct ModelHeader {
  std::size_t dims = 0;
  std::string layout;
  std::uint64_t seed = 0;
};

inline ModelHeader read_header(const ModelContainer& c) {
  ModelHeader h;
  std::uint64_t dims = 0;
  if (!parse_uint64(c.get("dims"), dims)) throw ParseError("model header 'dims' is not an integer");
  if (!parse_uint64(c.get("seed"), h.seed)) throw ParseError("model header 'seed' is not an integer");
  h.dims = static_cast<std::size_t>(dims);
  h.layout = c.has("layout") ? c.get("layout") : std::string();
  return h;
}

inline std::size_t read_size(const ModelContainer& c, const std::string& key) {
  std::uint64_t v = 0;
  if (!parse_uint64(c.get(key), v)) throw ParseError("model header '" + key + "' is not an integer");
  return static_cast<std::size_t>(v);
}

// Standardizes the dense part of a row into buffer; the sparse part is
// passed through.
inline FeatureRow standardized_row(const Standardizer& standardizer, const FeatureRow& row,
                                   std::vector<double>& buffer) {
  if (standardizer.empty()) return row;
  buffer.resize(row.dense.size());
  standardizer.apply(row.dense, buffer);
  FeatureRow out = row;
  out.dense = buffer;
  return out;
}

inline void write_standardizer(ModelContainer& c, const Standardizer& s) {
  c.add_vector("scaler_mean", s.mean());
  c.add_vector("scaler_scale", s.scale());
}

inline Standardizer read_standardizer(const ModelContainer& c) {
  const NamedBlock& mean = c.block("scaler_mean");
  const NamedBlock& scale = c.block("scaler_scale");
  return Standardizer(mean.values, scale.values);
}

inline double linear_score(const std::vector<double>& w, double b, const FeatureRow& row) {
  double z = b;
  const std::size_t d = row.dense.size();
  for (std::size_t j = 0; j < d; ++j) z += w[j] * row.dense[j];
  for (std::size_t k = 0; k < row.sparse_index.size(); ++k) {
    z += w[d + row.sparse_index[k]] * row.sparse_value[k];
  }
  return z;
}

// Adds scale * row to acc (a dense vector of the row's full width).
inline void axpy_row(double scale, const FeatureRow& row, std::vector<double>& acc) {
  const std::size_t d = row.dense.size();
  for (std::size_t j = 0; j < d; ++j) acc[j] += scale * row.dense[j];
  for (std::size_t k = 0; k < row.sparse_index.size(); ++k) {
    acc[d + row.sparse_index[k]] += scale * row.sparse_value[k];
  }
}

inline FeatureMatrix standardized_copy(const FeatureMatrix& x, const Standardizer& s) {
  FeatureMatrix copy = x;
  s.apply_in_place(copy);
  return copy;
}

}  // namespace infotweet::detail
