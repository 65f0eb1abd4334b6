#include <cmath>

#include "infotweet/models.hpp"
#include "model_common.hpp"

namespace infotweet {

namespace {

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double squared_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (const double x : v) s += x * x;
  return s;
}

}  // namespace

double logistic_objective(const LinearParams& params, const FeatureMatrix& x,
                          std::span<const Label> y, double c, LinearParams* grad) {
  if (grad != nullptr) {
    grad->weights.assign(params.weights.size(), 0.0);
    grad->bias = 0.0;
  }
  double loss = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const FeatureRow row = x.row(i);
    const double z = detail::linear_score(params.weights, params.bias, row);
    const double t = positive_target(y[i]);
    loss += softplus(z) - t * z;
    if (grad != nullptr) {
      const double r = sigmoid(z) - t;
      detail::axpy_row(r, row, grad->weights);
      grad->bias += r;
    }
  }
  loss += squared_norm(params.weights) / (2.0 * c);
  if (grad != nullptr) {
    for (std::size_t j = 0; j < params.weights.size(); ++j) grad->weights[j] += params.weights[j] / c;
  }
  return loss;
}

LogisticRegressionModel::LogisticRegressionModel(std::size_t dims, std::string layout,
                                                 std::uint64_t seed, LinearParams params,
                                                 Standardizer standardizer)
    : TrainedModel(ModelKind::kLogisticRegression, dims, std::move(layout), seed),
      params_(std::move(params)),
      standardizer_(std::move(standardizer)) {}

std::unique_ptr<LogisticRegressionModel> LogisticRegressionModel::fit(const ModelSpec& spec,
                                                                      const FeatureMatrix& x,
                                                                      std::span<const Label> y) {
  check_training_data(x, y);
  const double c = spec.param("C");
  const auto max_iter = static_cast<std::size_t>(spec.param("max_iter"));
  const double tol = spec.param("tol");

  Standardizer standardizer = Standardizer::fit(x);
  const FeatureMatrix xs = detail::standardized_copy(x, standardizer);

  LinearParams params{std::vector<double>(x.cols(), 0.0), 0.0};
  LinearParams grad;
  LinearParams trial;
  std::vector<double> history;
  double objective = logistic_objective(params, xs, y, c, &grad);
  history.push_back(objective);
  double step = 1.0;

  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    const double gnorm2 = squared_norm(grad.weights) + grad.bias * grad.bias;
    if (std::sqrt(gnorm2) < tol) break;
    bool accepted = false;
    double trial_objective = objective;
    for (int halving = 0; halving < 60; ++halving) {
      trial.weights.resize(params.weights.size());
      for (std::size_t j = 0; j < params.weights.size(); ++j) {
        trial.weights[j] = params.weights[j] - step * grad.weights[j];
      }
      trial.bias = params.bias - step * grad.bias;
      trial_objective = logistic_objective(trial, xs, y, c, nullptr);
      if (trial_objective <= objective - 1e-4 * step * gnorm2) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    params = trial;
    objective = logistic_objective(params, xs, y, c, &grad);
    history.push_back(objective);
    step *= 2.0;
  }

  auto model = std::make_unique<LogisticRegressionModel>(x.cols(), x.layout(), spec.seed(),
                                                         std::move(params), std::move(standardizer));
  model->history_ = std::move(history);
  return model;
}

double LogisticRegressionModel::score(const FeatureRow& row) const {
  std::vector<double> buffer;
  const FeatureRow scaled = detail::standardized_row(standardizer_, row, buffer);
  return sigmoid(detail::linear_score(params_.weights, params_.bias, scaled));
}

void LogisticRegressionModel::write_blocks(ModelContainer& c) const {
  c.add_vector("weights", params_.weights);
  c.add_vector("bias", std::vector<double>{params_.bias});
  detail::write_standardizer(c, standardizer_);
}

std::unique_ptr<LogisticRegressionModel> LogisticRegressionModel::from_container(
    const ModelContainer& c) {
  const detail::ModelHeader h = detail::read_header(c);
  LinearParams params{c.values("weights", 1, h.dims), c.values("bias", 1, 1)[0]};
  return std::make_unique<LogisticRegressionModel>(h.dims, h.layout, h.seed, std::move(params),
                                                   detail::read_standardizer(c));
}

double hinge_objective(const LinearParams& params, const FeatureMatrix& x,
                       std::span<const Label> y, double c, LinearParams* subgradient) {
  const double n = static_cast<double>(x.rows());
  const double lambda = 1.0 / (c * n);
  if (subgradient != nullptr) {
    subgradient->weights.assign(params.weights.size(), 0.0);
    subgradient->bias = 0.0;
  }
  double hinge = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const FeatureRow row = x.row(i);
    const double s = y[i] == Label::kInformative ? 1.0 : -1.0;
    const double margin = s * detail::linear_score(params.weights, params.bias, row);
    if (margin < 1.0) {
      hinge += 1.0 - margin;
      if (subgradient != nullptr) {
        detail::axpy_row(-s / n, row, subgradient->weights);
        subgradient->bias -= s / n;
      }
    }
  }
  if (subgradient != nullptr) {
    for (std::size_t j = 0; j < params.weights.size(); ++j) {
      subgradient->weights[j] += lambda * params.weights[j];
    }
  }
  return 0.5 * lambda * squared_norm(params.weights) + hinge / n;
}

LinearSvmModel::LinearSvmModel(std::size_t dims, std::string layout, std::uint64_t seed,
                               LinearParams params, Standardizer standardizer)
    : TrainedModel(ModelKind::kLinearSvm, dims, std::move(layout), seed),
      params_(std::move(params)),
      standardizer_(std::move(standardizer)) {}

std::unique_ptr<LinearSvmModel> LinearSvmModel::fit(const ModelSpec& spec, const FeatureMatrix& x,
                                                    std::span<const Label> y) {
  check_training_data(x, y);
  const double c = spec.param("C");
  const auto max_iter = static_cast<std::size_t>(spec.param("max_iter"));
  const double eta0 = spec.param("eta0");

  Standardizer standardizer = Standardizer::fit(x);
  const FeatureMatrix xs = detail::standardized_copy(x, standardizer);

  LinearParams params{std::vector<double>(x.cols(), 0.0), 0.0};
  LinearParams best = params;
  LinearParams sub;
  double best_objective = hinge_objective(params, xs, y, c, &sub);
  for (std::size_t t = 1; t <= max_iter; ++t) {
    const double eta = eta0 / std::sqrt(static_cast<double>(t));
    for (std::size_t j = 0; j < params.weights.size(); ++j) params.weights[j] -= eta * sub.weights[j];
    params.bias -= eta * sub.bias;
    const double objective = hinge_objective(params, xs, y, c, &sub);
    if (objective < best_objective) {
      best_objective = objective;
      best = params;
    }
  }
  return std::make_unique<LinearSvmModel>(x.cols(), x.layout(), spec.seed(), std::move(best),
                                          std::move(standardizer));
}

double LinearSvmModel::score(const FeatureRow& row) const {
  std::vector<double> buffer;
  const FeatureRow scaled = detail::standardized_row(standardizer_, row, buffer);
  return detail::linear_score(params_.weights, params_.bias, scaled);
}

void LinearSvmModel::write_blocks(ModelContainer& c) const {
  c.add_vector("weights", params_.weights);
  c.add_vector("bias", std::vector<double>{params_.bias});
  detail::write_standardizer(c, standardizer_);
}

std::unique_ptr<LinearSvmModel> LinearSvmModel::from_container(const ModelContainer& c) {
  const detail::ModelHeader h = detail::read_header(c);
  LinearParams params{c.values("weights", 1, h.dims), c.values("bias", 1, 1)[0]};
  return std::make_unique<LinearSvmModel>(h.dims, h.layout, h.seed, std::move(params),
                                          detail::read_standardizer(c));
}

}  // namespace infotweet
