#include "infotweet/models.hpp"

#include <cmath>
#include <ostream>

#include "infotweet/error.hpp"
#include "infotweet/strings.hpp"

namespace infotweet {

namespace {

struct KindInfo {
  ModelKind kind;
  std::string_view id;
  std::string_view label;
  std::string_view long_name;
};

constexpr std::array<KindInfo, 6> kKinds = {{
    {ModelKind::kLogisticRegression, "lr", "LR", "logistic_regression"},
    {ModelKind::kDecisionTree, "dt", "DT", "decision_tree"},
    {ModelKind::kRandomForest, "rf", "RF", "random_forest"},
    {ModelKind::kGaussianNB, "nb", "NB", "gaussian_nb"},
    {ModelKind::kMlp, "mlp", "MLP", "mlp"},
    {ModelKind::kLinearSvm, "svm", "SVM", "linear_svm"},
}};

const KindInfo& info(ModelKind kind) {
  for (const KindInfo& k : kKinds) {
    if (k.kind == kind) return k;
  }
  throw Error("unknown model kind");
}

bool is_integer(double v) { return std::floor(v) == v; }

void require(bool ok, ModelKind kind, const std::string& key, const char* what) {
  if (!ok) {
    throw ConfigError(std::string(model_kind_id(kind)) + " hyperparameter " + key + " must be " +
                      what);
  }
}

}  // namespace

std::string_view model_kind_id(ModelKind kind) { return info(kind).id; }
std::string_view model_kind_label(ModelKind kind) { return info(kind).label; }

ModelKind parse_model_kind(std::string_view name) {
  const std::string key = to_lower_ascii(trim(name));
  for (const KindInfo& k : kKinds) {
    if (key == k.id || key == k.long_name) return k.kind;
  }
  throw ConfigError("unknown model kind '" + std::string(name) +
                    "' (expected lr, dt, rf, nb, mlp or svm)");
}

std::map<std::string, double> ModelSpec::defaults(ModelKind kind) {
  switch (kind) {
    case ModelKind::kLogisticRegression:
      return {{"C", 1.0}, {"max_iter", 1000}, {"tol", 1e-6}};
    case ModelKind::kDecisionTree:
      return {{"max_depth", 0}, {"min_samples_split", 2}};
    case ModelKind::kRandomForest:
      return {{"n_estimators", 100}, {"max_features", 0}, {"bootstrap", 1},
              {"max_depth", 0},      {"min_samples_split", 2}};
    case ModelKind::kGaussianNB:
      return {{"var_smoothing", 1e-9}};
    case ModelKind::kMlp:
      return {{"hidden", 100}, {"learning_rate", 1e-3}, {"max_epochs", 200}, {"batch_size", 0},
              {"alpha", 1e-4}, {"tol", 1e-4},           {"n_iter_no_change", 10}};
    case ModelKind::kLinearSvm:
      return {{"C", 1.0}, {"max_iter", 1000}, {"eta0", 1.0}};
  }
  return {};
}

ModelSpec::ModelSpec(ModelKind kind, const std::map<std::string, double>& params,
                     std::uint64_t seed)
    : kind_(kind), params_(defaults(kind)), seed_(seed) {
  for (const auto& [key, value] : params) {
    const auto it = params_.find(key);
    if (it == params_.end()) {
      throw ConfigError("unknown hyperparameter '" + key + "' for model " +
                        std::string(model_kind_id(kind)));
    }
    if (!std::isfinite(value)) throw ConfigError("hyperparameter " + key + " must be finite");
    it->second = value;
  }
  for (const auto& [key, value] : params_) {
    if (key == "C" || key == "tol" || key == "learning_rate" || key == "eta0") {
      require(value > 0.0, kind, key, "positive");
    } else if (key == "alpha" || key == "var_smoothing") {
      require(value >= 0.0, kind, key, "non-negative");
    } else if (key == "bootstrap") {
      require(value == 0.0 || value == 1.0, kind, key, "0 or 1");
    } else if (key == "min_samples_split") {
      require(is_integer(value) && value >= 2.0, kind, key, "an integer >= 2");
    } else if (key == "max_depth" || key == "max_features" || key == "batch_size") {
      require(is_integer(value) && value >= 0.0, kind, key, "a non-negative integer");
    } else {
      require(is_integer(value) && value >= 1.0, kind, key, "a positive integer");
    }
  }
}

double ModelSpec::param(const std::string& key) const {
  const auto it = params_.find(key);
  if (it == params_.end()) throw ConfigError("model has no hyperparameter '" + key + "'");
  return it->second;
}

ModelSpec ModelSpec::with_seed(std::uint64_t seed) const {
  ModelSpec copy = *this;
  copy.seed_ = seed;
  return copy;
}

double TrainedModel::predict_score(const FeatureRow& row) const {
  if (row.dim() != dims_) {
    throw DimensionError("model expects " + std::to_string(dims_) + " features, row has " +
                         std::to_string(row.dim()));
  }
  return score(row);
}

Label TrainedModel::predict(const FeatureRow& row) const {
  return predict_score(row) > threshold() ? Label::kInformative : Label::kNotInformative;
}

std::vector<Label> TrainedModel::predict_all(const FeatureMatrix& matrix) const {
  std::vector<Label> out;
  out.reserve(matrix.rows());
  for (std::size_t r = 0; r < matrix.rows(); ++r) out.push_back(predict(matrix.row(r)));
  return out;
}

void TrainedModel::save(std::ostream& out) const {
  ModelContainer container;
  container.set("kind", std::string(model_kind_id(kind_)));
  container.set("dims", std::to_string(dims_));
  container.set("layout", layout_);
  container.set("seed", std::to_string(seed_));
  write_blocks(container);
  container.write(out);
}

void check_training_data(const FeatureMatrix& x, std::span<const Label> y) {
  if (x.rows() == 0) throw DataError("training set is empty");
  if (x.rows() != y.size()) {
    throw DimensionError("feature matrix has " + std::to_string(x.rows()) + " rows but " +
                         std::to_string(y.size()) + " labels");
  }
  std::size_t informative = 0;
  for (const Label label : y) informative += label == Label::kInformative ? 1 : 0;
  if (informative == 0 || informative == y.size()) {
    throw DataError("training set contains a single class");
  }
}

std::unique_ptr<TrainedModel> train(const ModelSpec& spec, const FeatureMatrix& x,
                                    std::span<const Label> y, std::size_t threads) {
  switch (spec.kind()) {
    case ModelKind::kLogisticRegression:
      return LogisticRegressionModel::fit(spec, x, y);
    case ModelKind::kDecisionTree:
      return DecisionTreeModel::fit(spec, x, y);
    case ModelKind::kRandomForest:
      return RandomForestModel::fit(spec, x, y, threads);
    case ModelKind::kGaussianNB:
      return GaussianNbModel::fit(spec, x, y);
    case ModelKind::kMlp:
      return MlpModel::fit(spec, x, y);
    case ModelKind::kLinearSvm:
      return LinearSvmModel::fit(spec, x, y);
  }
  throw Error("unknown model kind");
}

std::unique_ptr<TrainedModel> load_model(const ModelContainer& container) {
  switch (parse_model_kind(container.get("kind"))) {
    case ModelKind::kLogisticRegression:
      return LogisticRegressionModel::from_container(container);
    case ModelKind::kDecisionTree:
      return DecisionTreeModel::from_container(container);
    case ModelKind::kRandomForest:
      return RandomForestModel::from_container(container);
    case ModelKind::kGaussianNB:
      return GaussianNbModel::from_container(container);
    case ModelKind::kMlp:
      return MlpModel::from_container(container);
    case ModelKind::kLinearSvm:
      return LinearSvmModel::from_container(container);
  }
  throw Error("unknown model kind");
}

std::unique_ptr<TrainedModel> load_model(std::istream& in) {
  return load_model(ModelContainer::read(in));
}

}  // namespace infotweet
