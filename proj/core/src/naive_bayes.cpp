#include <algorithm>
#include <cmath>
#include <numbers>

#include "infotweet/models.hpp"
#include "model_common.hpp"

namespace infotweet {

GaussianNbModel::GaussianNbModel(std::size_t dims, std::string layout, std::uint64_t seed,
                                 std::array<double, 2> log_prior, std::vector<double> mean,
                                 std::vector<double> variance)
    : TrainedModel(ModelKind::kGaussianNB, dims, std::move(layout), seed),
      log_prior_(log_prior),
      mean_(std::move(mean)),
      variance_(std::move(variance)) {
  if (mean_.size() != 2 * dims || variance_.size() != 2 * dims) {
    throw DimensionError("naive Bayes statistics do not match the feature count");
  }
  precompute();
}

void GaussianNbModel::precompute() {
  // Log-likelihood of an all-zero row; sparse rows only correct their
  // nonzero columns.
  const std::size_t d = dims();
  for (std::size_t c = 0; c < 2; ++c) {
    double sum = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double var = variance_[c * d + j];
      const double mu = mean_[c * d + j];
      sum += -0.5 * std::log(2.0 * std::numbers::pi * var) - mu * mu / (2.0 * var);
    }
    zero_row_loglik_[c] = sum;
  }
}

std::unique_ptr<GaussianNbModel> GaussianNbModel::fit(const ModelSpec& spec, const FeatureMatrix& x,
                                                      std::span<const Label> y) {
  check_training_data(x, y);
  const std::size_t d = x.cols();
  const std::size_t dd = x.dense_cols();
  const std::size_t n = x.rows();

  std::array<double, 2> count{0.0, 0.0};
  std::vector<double> sum(2 * d, 0.0);
  std::vector<double> all_sum(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = class_index(y[i]);
    count[c] += 1.0;
    const FeatureRow row = x.row(i);
    for (std::size_t j = 0; j < dd; ++j) {
      sum[c * d + j] += row.dense[j];
      all_sum[j] += row.dense[j];
    }
    for (std::size_t k = 0; k < row.sparse_index.size(); ++k) {
      const std::size_t j = dd + row.sparse_index[k];
      sum[c * d + j] += row.sparse_value[k];
      all_sum[j] += row.sparse_value[k];
    }
  }
  std::vector<double> mean(2 * d);
  std::vector<double> all_mean(d);
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::size_t j = 0; j < d; ++j) mean[c * d + j] = sum[c * d + j] / count[c];
  }
  for (std::size_t j = 0; j < d; ++j) all_mean[j] = all_sum[j] / static_cast<double>(n);

  // Squared deviations; implicit sparse zeros contribute mu^2 each, so the
  // sparse block starts from that baseline and corrects nonzero entries.
  std::vector<double> sq(2 * d, 0.0);
  std::vector<double> all_sq(d, 0.0);
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::size_t j = dd; j < d; ++j) {
      sq[c * d + j] = count[c] * mean[c * d + j] * mean[c * d + j];
    }
  }
  for (std::size_t j = dd; j < d; ++j) all_sq[j] = static_cast<double>(n) * all_mean[j] * all_mean[j];
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = class_index(y[i]);
    const FeatureRow row = x.row(i);
    for (std::size_t j = 0; j < dd; ++j) {
      const double diff = row.dense[j] - mean[c * d + j];
      const double all_diff = row.dense[j] - all_mean[j];
      sq[c * d + j] += diff * diff;
      all_sq[j] += all_diff * all_diff;
    }
    for (std::size_t k = 0; k < row.sparse_index.size(); ++k) {
      const std::size_t j = dd + row.sparse_index[k];
      const double v = row.sparse_value[k];
      const double mu = mean[c * d + j];
      const double all_mu = all_mean[j];
      sq[c * d + j] += (v - mu) * (v - mu) - mu * mu;
      all_sq[j] += (v - all_mu) * (v - all_mu) - all_mu * all_mu;
    }
  }

  double max_var = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    max_var = std::max(max_var, std::max(0.0, all_sq[j]) / static_cast<double>(n));
  }
  double epsilon = spec.param("var_smoothing") * max_var;
  if (!(epsilon > 0.0)) epsilon = 1e-9;

  std::vector<double> variance(2 * d);
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::size_t j = 0; j < d; ++j) {
      variance[c * d + j] = std::max(0.0, sq[c * d + j]) / count[c] + epsilon;
    }
  }
  const std::array<double, 2> log_prior{std::log(count[0] / static_cast<double>(n)),
                                        std::log(count[1] / static_cast<double>(n))};
  return std::make_unique<GaussianNbModel>(d, x.layout(), spec.seed(), log_prior, std::move(mean),
                                           std::move(variance));
}

std::array<double, 2> GaussianNbModel::posterior(const FeatureRow& row) const {
  if (row.dim() != dims()) throw DimensionError("naive Bayes row dimension mismatch");
  const std::size_t d = dims();
  const std::size_t dd = row.dense.size();
  std::array<double, 2> loglik{};
  for (std::size_t c = 0; c < 2; ++c) {
    const double* mu = mean_.data() + c * d;
    const double* var = variance_.data() + c * d;
    double ll = log_prior_[c] + zero_row_loglik_[c];
    for (std::size_t j = 0; j < dd; ++j) {
      const double diff = row.dense[j] - mu[j];
      ll += -diff * diff / (2.0 * var[j]) + mu[j] * mu[j] / (2.0 * var[j]);
    }
    for (std::size_t k = 0; k < row.sparse_index.size(); ++k) {
      const std::size_t j = dd + row.sparse_index[k];
      const double diff = row.sparse_value[k] - mu[j];
      ll += -diff * diff / (2.0 * var[j]) + mu[j] * mu[j] / (2.0 * var[j]);
    }
    loglik[c] = ll;
  }
  const double top = std::max(loglik[0], loglik[1]);
  const double e0 = std::exp(loglik[0] - top);
  const double e1 = std::exp(loglik[1] - top);
  return {e0 / (e0 + e1), e1 / (e0 + e1)};
}

double GaussianNbModel::score(const FeatureRow& row) const { return posterior(row)[0]; }

void GaussianNbModel::write_blocks(ModelContainer& c) const {
  c.add_vector("log_prior", std::vector<double>(log_prior_.begin(), log_prior_.end()));
  c.add_block("mean", 2, dims(), mean_);
  c.add_block("variance", 2, dims(), variance_);
}

std::unique_ptr<GaussianNbModel> GaussianNbModel::from_container(const ModelContainer& c) {
  const detail::ModelHeader h = detail::read_header(c);
  const auto& prior = c.values("log_prior", 1, 2);
  return std::make_unique<GaussianNbModel>(h.dims, h.layout, h.seed,
                                           std::array<double, 2>{prior[0], prior[1]},
                                           c.values("mean", 2, h.dims),
                                           c.values("variance", 2, h.dims));
}

}  // namespace infotweet
