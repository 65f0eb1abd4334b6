#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "infotweet/models.hpp"
#include "model_common.hpp"

namespace infotweet {

MlpParams MlpParams::zeros(std::size_t inputs, std::size_t hidden) {
  MlpParams p;
  p.inputs = inputs;
  p.hidden = hidden;
  p.w1.assign(hidden * inputs, 0.0);
  p.b1.assign(hidden, 0.0);
  p.w2.assign(2 * hidden, 0.0);
  p.b2.assign(2, 0.0);
  return p;
}

namespace {

void hidden_preactivation(const MlpParams& p, const FeatureRow& row, std::vector<double>& a) {
  a.assign(p.b1.begin(), p.b1.end());
  const std::size_t dd = row.dense.size();
  for (std::size_t h = 0; h < p.hidden; ++h) {
    const double* w = p.w1.data() + h * p.inputs;
    double sum = 0.0;
    for (std::size_t j = 0; j < dd; ++j) sum += w[j] * row.dense[j];
    for (std::size_t k = 0; k < row.sparse_index.size(); ++k) {
      sum += w[dd + row.sparse_index[k]] * row.sparse_value[k];
    }
    a[h] += sum;
  }
}

std::array<double, 2> output_logits(const MlpParams& p, const std::vector<double>& hidden) {
  std::array<double, 2> z{p.b2[0], p.b2[1]};
  for (std::size_t c = 0; c < 2; ++c) {
    const double* w = p.w2.data() + c * p.hidden;
    for (std::size_t h = 0; h < p.hidden; ++h) z[c] += w[h] * hidden[h];
  }
  return z;
}

void relu(std::vector<double>& v) {
  for (double& x : v) x = std::max(0.0, x);
}

}  // namespace

std::array<double, 2> mlp_forward(const MlpParams& params, const FeatureRow& row) {
  if (row.dim() != params.inputs) throw DimensionError("MLP input dimension mismatch");
  std::vector<double> a;
  hidden_preactivation(params, row, a);
  relu(a);
  const std::array<double, 2> z = output_logits(params, a);
  const double top = std::max(z[0], z[1]);
  const double e0 = std::exp(z[0] - top);
  const double e1 = std::exp(z[1] - top);
  return {e0 / (e0 + e1), e1 / (e0 + e1)};
}

double mlp_objective(const MlpParams& params, const FeatureMatrix& x, std::span<const Label> y,
                     std::span<const std::size_t> rows, double alpha, MlpParams* grad) {
  if (rows.empty()) throw DataError("MLP objective over an empty batch");
  if (grad != nullptr) *grad = MlpParams::zeros(params.inputs, params.hidden);
  const double m = static_cast<double>(rows.size());
  std::vector<double> a;
  std::vector<double> h;
  std::vector<double> dh(params.hidden);
  double loss = 0.0;
  for (const std::size_t r : rows) {
    const FeatureRow row = x.row(r);
    hidden_preactivation(params, row, a);
    h = a;
    relu(h);
    const std::array<double, 2> z = output_logits(params, h);
    const double top = std::max(z[0], z[1]);
    const double lse = top + std::log(std::exp(z[0] - top) + std::exp(z[1] - top));
    const std::size_t target = class_index(y[r]);
    loss += lse - z[target];
    if (grad == nullptr) continue;

    std::array<double, 2> dz{std::exp(z[0] - lse), std::exp(z[1] - lse)};
    dz[target] -= 1.0;
    dz[0] /= m;
    dz[1] /= m;
    for (std::size_t c = 0; c < 2; ++c) {
      grad->b2[c] += dz[c];
      double* gw = grad->w2.data() + c * params.hidden;
      for (std::size_t k = 0; k < params.hidden; ++k) gw[k] += dz[c] * h[k];
    }
    for (std::size_t k = 0; k < params.hidden; ++k) {
      const double back = params.w2[k] * dz[0] + params.w2[params.hidden + k] * dz[1];
      dh[k] = a[k] > 0.0 ? back : 0.0;
    }
    const std::size_t dd = row.dense.size();
    for (std::size_t k = 0; k < params.hidden; ++k) {
      if (dh[k] == 0.0) continue;
      grad->b1[k] += dh[k];
      double* gw = grad->w1.data() + k * params.inputs;
      for (std::size_t j = 0; j < dd; ++j) gw[j] += dh[k] * row.dense[j];
      for (std::size_t q = 0; q < row.sparse_index.size(); ++q) {
        gw[dd + row.sparse_index[q]] += dh[k] * row.sparse_value[q];
      }
    }
  }
  double penalty = 0.0;
  for (const double w : params.w1) penalty += w * w;
  for (const double w : params.w2) penalty += w * w;
  if (grad != nullptr && alpha > 0.0) {
    for (std::size_t i = 0; i < params.w1.size(); ++i) grad->w1[i] += alpha * params.w1[i] / m;
    for (std::size_t i = 0; i < params.w2.size(); ++i) grad->w2[i] += alpha * params.w2[i] / m;
  }
  return loss / m + alpha * penalty / (2.0 * m);
}

MlpModel::MlpModel(std::size_t dims, std::string layout, std::uint64_t seed, MlpParams params,
                   Standardizer standardizer)
    : TrainedModel(ModelKind::kMlp, dims, std::move(layout), seed),
      params_(std::move(params)),
      standardizer_(std::move(standardizer)) {}

namespace {

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
};

void adam_step(std::vector<double>& param, const std::vector<double>& grad, AdamState& state,
               double lr_t) {
  constexpr double kBeta1 = 0.9;
  constexpr double kBeta2 = 0.999;
  constexpr double kEps = 1e-8;
  if (state.m.empty()) {
    state.m.assign(param.size(), 0.0);
    state.v.assign(param.size(), 0.0);
  }
  for (std::size_t i = 0; i < param.size(); ++i) {
    state.m[i] = kBeta1 * state.m[i] + (1.0 - kBeta1) * grad[i];
    state.v[i] = kBeta2 * state.v[i] + (1.0 - kBeta2) * grad[i] * grad[i];
    param[i] -= lr_t * state.m[i] / (std::sqrt(state.v[i]) + kEps);
  }
}

void glorot_uniform(std::vector<double>& values, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (double& v : values) v = rng.uniform(-bound, bound);
}

}  // namespace

std::unique_ptr<MlpModel> MlpModel::fit(const ModelSpec& spec, const FeatureMatrix& x,
                                        std::span<const Label> y) {
  check_training_data(x, y);
  const auto hidden = static_cast<std::size_t>(spec.param("hidden"));
  const double lr = spec.param("learning_rate");
  const auto max_epochs = static_cast<std::size_t>(spec.param("max_epochs"));
  const double alpha = spec.param("alpha");
  const double tol = spec.param("tol");
  const auto patience = static_cast<std::size_t>(spec.param("n_iter_no_change"));
  std::size_t batch = static_cast<std::size_t>(spec.param("batch_size"));
  if (batch == 0) batch = std::min<std::size_t>(200, x.rows());
  batch = std::min(batch, x.rows());

  Standardizer standardizer = Standardizer::fit(x);
  const FeatureMatrix xs = detail::standardized_copy(x, standardizer);

  Rng rng(spec.seed());
  MlpParams params = MlpParams::zeros(x.cols(), hidden);
  glorot_uniform(params.w1, x.cols(), hidden, rng);
  glorot_uniform(params.b1, x.cols(), hidden, rng);
  glorot_uniform(params.w2, hidden, 2, rng);
  glorot_uniform(params.b2, hidden, 2, rng);

  std::array<AdamState, 4> adam;
  std::vector<std::size_t> order(x.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  MlpParams grad;
  std::vector<double> history;
  double best_loss = std::numeric_limits<double>::infinity();
  std::size_t no_improvement = 0;
  std::size_t step = 0;

  for (std::size_t epoch = 0; epoch < max_epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(order.size(), start + batch);
      const std::span<const std::size_t> rows(order.data() + start, end - start);
      const double loss = mlp_objective(params, xs, y, rows, alpha, &grad);
      epoch_loss += loss * static_cast<double>(rows.size());
      ++step;
      const double t = static_cast<double>(step);
      const double lr_t = lr * std::sqrt(1.0 - std::pow(0.999, t)) / (1.0 - std::pow(0.9, t));
      adam_step(params.w1, grad.w1, adam[0], lr_t);
      adam_step(params.b1, grad.b1, adam[1], lr_t);
      adam_step(params.w2, grad.w2, adam[2], lr_t);
      adam_step(params.b2, grad.b2, adam[3], lr_t);
    }
    epoch_loss /= static_cast<double>(order.size());
    history.push_back(epoch_loss);
    if (epoch_loss > best_loss - tol) {
      ++no_improvement;
    } else {
      no_improvement = 0;
    }
    best_loss = std::min(best_loss, epoch_loss);
    if (no_improvement > patience) break;
  }

  auto model = std::make_unique<MlpModel>(x.cols(), x.layout(), spec.seed(), std::move(params),
                                          std::move(standardizer));
  model->history_ = std::move(history);
  return model;
}

double MlpModel::score(const FeatureRow& row) const {
  std::vector<double> buffer;
  const FeatureRow scaled = detail::standardized_row(standardizer_, row, buffer);
  return mlp_forward(params_, scaled)[0];
}

void MlpModel::write_blocks(ModelContainer& c) const {
  c.set("hidden", std::to_string(params_.hidden));
  c.add_block("w1", params_.hidden, params_.inputs, params_.w1);
  c.add_vector("b1", params_.b1);
  c.add_block("w2", 2, params_.hidden, params_.w2);
  c.add_vector("b2", params_.b2);
  detail::write_standardizer(c, standardizer_);
}

std::unique_ptr<MlpModel> MlpModel::from_container(const ModelContainer& c) {
  const detail::ModelHeader h = detail::read_header(c);
  const std::size_t hidden = detail::read_size(c, "hidden");
  MlpParams p;
  p.inputs = h.dims;
  p.hidden = hidden;
  p.w1 = c.values("w1", hidden, h.dims);
  p.b1 = c.values("b1", 1, hidden);
  p.w2 = c.values("w2", 2, hidden);
  p.b2 = c.values("b2", 1, 2);
  return std::make_unique<MlpModel>(h.dims, h.layout, h.seed, std::move(p),
                                    detail::read_standardizer(c));
}

}  // namespace infotweet
