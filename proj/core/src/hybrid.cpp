#include "infotweet/hybrid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "infotweet/error.hpp"
#include "infotweet/random.hpp"
#include "model_common.hpp"

namespace infotweet {

void HybridConfig::validate() const {
  if (handcrafted_dim == 0 || encoder_dim == 0 || handcrafted_width == 0 || encoder_width == 0) {
    throw ConfigError("hybrid dimensions must all be at least 1");
  }
}

void TrainSettings::validate() const {
  if (!(learning_rate > 0.0)) throw ConfigError("hybrid learning rate must be positive");
  if (!(momentum >= 0.0 && momentum < 1.0)) throw ConfigError("hybrid momentum must be in [0, 1)");
  if (epochs == 0) throw ConfigError("hybrid epochs must be at least 1");
  if (batch_size == 0) throw ConfigError("hybrid batch size must be at least 1");
}

HybridParams HybridParams::zeros(const HybridConfig& config) {
  config.validate();
  const std::size_t p = config.handcrafted_width;
  const std::size_t q = config.encoder_width;
  HybridParams out;
  out.config = config;
  out.w1.assign(p * config.handcrafted_dim, 0.0);
  out.b1.assign(p, 0.0);
  out.w2.assign(q * config.encoder_dim, 0.0);
  out.b2.assign(q, 0.0);
  out.w3.assign(2 * (p + q), 0.0);
  out.b3.assign(2, 0.0);
  return out;
}

HybridParams HybridParams::initialize(const HybridConfig& config, std::uint64_t seed) {
  HybridParams out = zeros(config);
  Rng rng(seed);
  auto fill = [&rng](std::vector<double>& v, std::size_t fan_in) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (double& x : v) x = rng.uniform(-bound, bound);
  };
  fill(out.w1, config.handcrafted_dim);
  fill(out.b1, config.handcrafted_dim);
  fill(out.w2, config.encoder_dim);
  fill(out.b2, config.encoder_dim);
  fill(out.w3, config.handcrafted_width + config.encoder_width);
  fill(out.b3, config.handcrafted_width + config.encoder_width);
  return out;
}

std::array<std::vector<double>*, 6> HybridParams::blocks() { return {&w1, &b1, &w2, &b2, &w3, &b3}; }

std::array<const std::vector<double>*, 6> HybridParams::blocks() const {
  return {&w1, &b1, &w2, &b2, &w3, &b3};
}

void HybridParams::write_blocks(ModelContainer& c) const {
  const std::size_t p = config.handcrafted_width;
  const std::size_t q = config.encoder_width;
  c.add_block("W1", p, config.handcrafted_dim, w1);
  c.add_vector("b1", b1);
  c.add_block("W2", q, config.encoder_dim, w2);
  c.add_vector("b2", b2);
  c.add_block("W3", 2, p + q, w3);
  c.add_vector("b3", b3);
}

HybridParams HybridParams::read_blocks(const ModelContainer& c, const HybridConfig& config) {
  HybridParams out = zeros(config);
  const std::size_t p = config.handcrafted_width;
  const std::size_t q = config.encoder_width;
  out.w1 = c.values("W1", p, config.handcrafted_dim);
  out.b1 = c.values("b1", 1, p);
  out.w2 = c.values("W2", q, config.encoder_dim);
  out.b2 = c.values("b2", 1, q);
  out.w3 = c.values("W3", 2, p + q);
  out.b3 = c.values("b3", 1, 2);
  return out;
}

void HybridData::add(std::span<const double> h, std::span<const double> e, Label y) {
  if (h.size() != handcrafted_dim_ || e.size() != encoder_dim_) {
    throw DimensionError("hybrid example has dimensions (" + std::to_string(h.size()) + ", " +
                         std::to_string(e.size()) + "), expected (" +
                         std::to_string(handcrafted_dim_) + ", " + std::to_string(encoder_dim_) +
                         ")");
  }
  h_.insert(h_.end(), h.begin(), h.end());
  e_.insert(e_.end(), e.begin(), e.end());
  labels_.push_back(y);
}

namespace {

struct Activations {
  std::vector<double> pre_u;  // W1 h + b1
  std::vector<double> pre_v;  // W2 e + b2
  std::vector<double> joint;  // [act(pre_u); act(pre_v)]
  std::array<double, 2> logits{};
};

void affine(const std::vector<double>& w, const std::vector<double>& b, std::span<const double> x,
            std::vector<double>& out) {
  const std::size_t rows = b.size();
  const std::size_t cols = x.size();
  out.resize(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const double* wr = w.data() + r * cols;
    double sum = b[r];
    for (std::size_t c = 0; c < cols; ++c) sum += wr[c] * x[c];
    out[r] = sum;
  }
}

double activate(double x, BranchActivation a) {
  return a == BranchActivation::kRelu ? std::max(0.0, x) : x;
}

double activate_slope(double x, BranchActivation a) {
  return a == BranchActivation::kRelu ? (x > 0.0 ? 1.0 : 0.0) : 1.0;
}

void check_inputs(const HybridParams& params, std::span<const double> h, std::span<const double> e) {
  if (h.size() != params.config.handcrafted_dim || e.size() != params.config.encoder_dim) {
    throw DimensionError("hybrid input has dimensions (" + std::to_string(h.size()) + ", " +
                         std::to_string(e.size()) + "), model expects (" +
                         std::to_string(params.config.handcrafted_dim) + ", " +
                         std::to_string(params.config.encoder_dim) + ")");
  }
}

void run_forward(const HybridParams& params, std::span<const double> h, std::span<const double> e,
                 Activations& act) {
  affine(params.w1, params.b1, h, act.pre_u);
  affine(params.w2, params.b2, e, act.pre_v);
  const std::size_t p = act.pre_u.size();
  const std::size_t q = act.pre_v.size();
  act.joint.resize(p + q);
  for (std::size_t i = 0; i < p; ++i) act.joint[i] = activate(act.pre_u[i], params.config.activation);
  for (std::size_t i = 0; i < q; ++i) act.joint[p + i] = activate(act.pre_v[i], params.config.activation);
  for (std::size_t c = 0; c < 2; ++c) {
    const double* w = params.w3.data() + c * (p + q);
    double z = params.b3[c];
    for (std::size_t i = 0; i < p + q; ++i) z += w[i] * act.joint[i];
    act.logits[c] = z;
  }
}

std::array<double, 2> softmax(const std::array<double, 2>& z) {
  const double top = std::max(z[0], z[1]);
  const double e0 = std::exp(z[0] - top);
  const double e1 = std::exp(z[1] - top);
  return {e0 / (e0 + e1), e1 / (e0 + e1)};
}

void check_both_classes(std::span<const Label> labels) {
  std::size_t informative = 0;
  for (const Label l : labels) informative += l == Label::kInformative ? 1 : 0;
  if (labels.empty()) throw DataError("hybrid training data is empty");
  if (informative == 0 || informative == labels.size()) {
    throw DataError("hybrid training data contains a single class");
  }
}

}  // namespace

std::array<double, 2> hybrid_logits(const HybridParams& params, std::span<const double> h,
                                    std::span<const double> e) {
  check_inputs(params, h, e);
  Activations act;
  run_forward(params, h, e, act);
  return act.logits;
}

std::array<double, 2> forward(const HybridParams& params, std::span<const double> h,
                              std::span<const double> e) {
  return softmax(hybrid_logits(params, h, e));
}

double loss(const std::array<double, 2>& probs, Label y) {
  return -std::log(std::max(probs[class_index(y)], 1e-12));
}

double gradients(const HybridParams& params, const HybridData& data,
                 std::span<const std::size_t> batch, HybridParams& grad) {
  if (batch.empty()) throw DataError("gradient over an empty batch");
  if (data.handcrafted_dim() != params.config.handcrafted_dim ||
      data.encoder_dim() != params.config.encoder_dim) {
    throw DimensionError("hybrid data dimensions do not match the model");
  }
  grad = HybridParams::zeros(params.config);
  const std::size_t p = params.config.handcrafted_width;
  const std::size_t q = params.config.encoder_width;
  const std::size_t dh = params.config.handcrafted_dim;
  const std::size_t de = params.config.encoder_dim;
  const double inv_m = 1.0 / static_cast<double>(batch.size());

  Activations act;
  std::vector<double> d_joint(p + q);
  double total = 0.0;
  for (const std::size_t i : batch) {
    const auto h = data.h(i);
    const auto e = data.e(i);
    run_forward(params, h, e, act);
    const std::array<double, 2> probs = softmax(act.logits);
    total += loss(probs, data.label(i));

    std::array<double, 2> dz = probs;
    dz[class_index(data.label(i))] -= 1.0;
    dz[0] *= inv_m;
    dz[1] *= inv_m;

    for (std::size_t c = 0; c < 2; ++c) {
      grad.b3[c] += dz[c];
      double* g = grad.w3.data() + c * (p + q);
      for (std::size_t k = 0; k < p + q; ++k) g[k] += dz[c] * act.joint[k];
    }
    for (std::size_t k = 0; k < p + q; ++k) {
      d_joint[k] = params.w3[k] * dz[0] + params.w3[(p + q) + k] * dz[1];
    }
    for (std::size_t k = 0; k < p; ++k) {
      const double d = d_joint[k] * activate_slope(act.pre_u[k], params.config.activation);
      if (d == 0.0) continue;
      grad.b1[k] += d;
      double* g = grad.w1.data() + k * dh;
      for (std::size_t j = 0; j < dh; ++j) g[j] += d * h[j];
    }
    for (std::size_t k = 0; k < q; ++k) {
      const double d = d_joint[p + k] * activate_slope(act.pre_v[k], params.config.activation);
      if (d == 0.0) continue;
      grad.b2[k] += d;
      double* g = grad.w2.data() + k * de;
      for (std::size_t j = 0; j < de; ++j) g[j] += d * e[j];
    }
  }
  return total * inv_m;
}

HybridParams train_hybrid(const HybridConfig& config, const TrainSettings& settings,
                          const HybridData& data, std::vector<double>* epoch_losses) {
  config.validate();
  settings.validate();
  check_both_classes(data.labels());

  HybridParams params = HybridParams::initialize(config, settings.seed);
  HybridParams velocity = HybridParams::zeros(config);
  HybridParams grad;
  Rng rng(settings.seed);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (epoch_losses != nullptr) epoch_losses->clear();

  for (std::size_t epoch = 0; epoch < settings.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t start = 0; start < order.size(); start += settings.batch_size) {
      const std::size_t end = std::min(order.size(), start + settings.batch_size);
      gradients(params, data, std::span<const std::size_t>(order).subspan(start, end - start), grad);
      auto theta = params.blocks();
      auto vel = velocity.blocks();
      auto g = std::as_const(grad).blocks();
      for (std::size_t b = 0; b < theta.size(); ++b) {
        std::vector<double>& t = *theta[b];
        std::vector<double>& v = *vel[b];
        const std::vector<double>& gb = *g[b];
        for (std::size_t i = 0; i < t.size(); ++i) {
          v[i] = settings.momentum * v[i] - settings.learning_rate * gb[i];
          t[i] += v[i];
        }
      }
    }
    if (epoch_losses != nullptr) {
      double total = 0.0;
      for (std::size_t i = 0; i < data.size(); ++i) {
        total += loss(forward(params, data.h(i), data.e(i)), data.label(i));
      }
      epoch_losses->push_back(total / static_cast<double>(data.size()));
    }
  }
  return params;
}

Label label_from_probs(const std::array<double, 2>& probs) {
  return probs[0] > probs[1] ? Label::kInformative : Label::kNotInformative;
}

Label predict_hybrid(const HybridParams& params, std::span<const double> h,
                     std::span<const double> e) {
  const std::array<double, 2> z = hybrid_logits(params, h, e);
  return z[0] > z[1] ? Label::kInformative : Label::kNotInformative;
}

HybridModel::HybridModel(HybridParams params, Standardizer standardizer, std::string layout)
    : params_(std::move(params)), standardizer_(std::move(standardizer)), layout_(std::move(layout)) {
  if (!standardizer_.empty() && standardizer_.mean().size() != params_.config.handcrafted_dim) {
    throw DimensionError("hybrid standardizer does not match the handcrafted dimension");
  }
}

std::array<double, 2> HybridModel::probabilities(std::span<const double> h,
                                                 std::span<const double> e) const {
  if (standardizer_.empty()) return forward(params_, h, e);
  if (h.size() != params_.config.handcrafted_dim) {
    throw DimensionError("hybrid handcrafted input dimension mismatch");
  }
  std::vector<double> scaled(h.size());
  standardizer_.apply(h, scaled);
  return forward(params_, scaled, e);
}

Label HybridModel::predict(std::span<const double> h, std::span<const double> e) const {
  return label_from_probs(probabilities(h, e));
}

void HybridModel::save(std::ostream& out) const {
  ModelContainer c;
  const HybridConfig& cfg = params_.config;
  c.set("kind", "hybrid");
  c.set("dims", std::to_string(cfg.handcrafted_dim + cfg.encoder_dim));
  c.set("layout", layout_);
  c.set("handcrafted_dim", std::to_string(cfg.handcrafted_dim));
  c.set("encoder_dim", std::to_string(cfg.encoder_dim));
  c.set("handcrafted_width", std::to_string(cfg.handcrafted_width));
  c.set("encoder_width", std::to_string(cfg.encoder_width));
  c.set("activation", cfg.activation == BranchActivation::kRelu ? "relu" : "identity");
  params_.write_blocks(c);
  if (!standardizer_.empty()) detail::write_standardizer(c, standardizer_);
  c.write(out);
}

HybridModel HybridModel::from_container(const ModelContainer& c) {
  if (c.get("kind") != "hybrid") throw ParseError("model file is not a hybrid model");
  HybridConfig cfg;
  cfg.handcrafted_dim = detail::read_size(c, "handcrafted_dim");
  cfg.encoder_dim = detail::read_size(c, "encoder_dim");
  cfg.handcrafted_width = detail::read_size(c, "handcrafted_width");
  cfg.encoder_width = detail::read_size(c, "encoder_width");
  const std::string& activation = c.get("activation");
  if (activation == "relu") {
    cfg.activation = BranchActivation::kRelu;
  } else if (activation == "identity") {
    cfg.activation = BranchActivation::kIdentity;
  } else {
    throw ParseError("unknown hybrid activation '" + activation + "'");
  }
  HybridParams params = HybridParams::read_blocks(c, cfg);
  Standardizer standardizer;
  bool has_scaler = false;
  for (const NamedBlock& b : c.blocks()) has_scaler = has_scaler || b.name == "scaler_mean";
  if (has_scaler) standardizer = detail::read_standardizer(c);
  return HybridModel(std::move(params), std::move(standardizer),
                     c.has("layout") ? c.get("layout") : std::string());
}

HybridModel HybridModel::load(std::istream& in) { return from_container(ModelContainer::read(in)); }

}  // namespace infotweet
