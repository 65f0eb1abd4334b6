#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "infotweet/corpus.hpp"
#include "infotweet/feature_matrix.hpp"
#include "infotweet/model_io.hpp"
#include "infotweet/random.hpp"

namespace infotweet {

enum class ModelKind {
  kLogisticRegression,
  kDecisionTree,
  kRandomForest,
  kGaussianNB,
  kMlp,
  kLinearSvm,
};

// Short identifier used in configs and model files: lr, dt, rf, nb, mlp, svm.
std::string_view model_kind_id(ModelKind kind);
// Report label: LR, DT, RF, NB, MLP, SVM.
std::string_view model_kind_label(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);

// Hyperparameters per kind (defaults in brackets):
//   lr:  C [1.0], max_iter [1000], tol [1e-6]
//   dt:  max_depth [0 = unlimited], min_samples_split [2]
//   rf:  n_estimators [100], max_features [0 = sqrt(d)], bootstrap [1],
//        max_depth [0], min_samples_split [2]
//   nb:  var_smoothing [1e-9]
//   mlp: hidden [100], learning_rate [1e-3], max_epochs [200], batch_size [0 = min(200, n)],
//        alpha [1e-4], tol [1e-4], n_iter_no_change [10]
//   svm: C [1.0], max_iter [1000], eta0 [1.0]
class ModelSpec {
 public:
  // Throws ConfigError on an unknown key or out-of-range value.
  explicit ModelSpec(ModelKind kind, const std::map<std::string, double>& params = {},
                     std::uint64_t seed = 0);

  ModelKind kind() const { return kind_; }
  std::uint64_t seed() const { return seed_; }
  double param(const std::string& key) const;
  const std::map<std::string, double>& params() const { return params_; }
  ModelSpec with_seed(std::uint64_t seed) const;

  static std::map<std::string, double> defaults(ModelKind kind);

 private:
  ModelKind kind_;
  std::map<std::string, double> params_;
  std::uint64_t seed_;
};

class TrainedModel {
 public:
  virtual ~TrainedModel() = default;

  ModelKind kind() const { return kind_; }
  std::size_t dims() const { return dims_; }
  const std::string& layout() const { return layout_; }
  std::uint64_t seed() const { return seed_; }

  // Probability of Informative for lr/nb/mlp/rf (rf: fraction of trees
  // voting Informative), leaf Informative fraction for dt, signed margin for
  // svm. Throws DimensionError on a width mismatch.
  double predict_score(const FeatureRow& row) const;
  // Scores exactly at the decision threshold classify as NotInformative.
  Label predict(const FeatureRow& row) const;
  std::vector<Label> predict_all(const FeatureMatrix& matrix) const;

  void save(std::ostream& out) const;

 protected:
  TrainedModel(ModelKind kind, std::size_t dims, std::string layout, std::uint64_t seed)
      : kind_(kind), dims_(dims), layout_(std::move(layout)), seed_(seed) {}

  virtual double score(const FeatureRow& row) const = 0;
  virtual double threshold() const { return 0.5; }
  virtual void write_blocks(ModelContainer& container) const = 0;

 private:
  ModelKind kind_;
  std::size_t dims_;
  std::string layout_;
  std::uint64_t seed_;
};

// Throws DataError when labels hold a single class or X is empty.
// threads only affects random forests; results do not depend on it.
std::unique_ptr<TrainedModel> train(const ModelSpec& spec, const FeatureMatrix& x,
                                    std::span<const Label> y, std::size_t threads = 1);
std::unique_ptr<TrainedModel> load_model(std::istream& in);
std::unique_ptr<TrainedModel> load_model(const ModelContainer& container);

// ---------------------------------------------------------------------------
// Linear models

struct LinearParams {
  std::vector<double> weights;
  double bias = 0.0;
};

// sum_i log(1 + exp(z_i)) - t_i z_i + ||w||^2 / (2C), z_i = w.x_i + b,
// t_i = 1 for Informative. Writes the gradient when grad is non-null.
double logistic_objective(const LinearParams& params, const FeatureMatrix& x,
                          std::span<const Label> y, double c, LinearParams* grad);

class LogisticRegressionModel final : public TrainedModel {
 public:
  // Full-batch gradient descent with backtracking (Armijo) line search.
  static std::unique_ptr<LogisticRegressionModel> fit(const ModelSpec& spec, const FeatureMatrix& x,
                                                      std::span<const Label> y);
  static std::unique_ptr<LogisticRegressionModel> from_container(const ModelContainer& c);

  LogisticRegressionModel(std::size_t dims, std::string layout, std::uint64_t seed,
                          LinearParams params, Standardizer standardizer);

  const LinearParams& params() const { return params_; }
  const std::vector<double>& objective_history() const { return history_; }

 protected:
  double score(const FeatureRow& row) const override;
  void write_blocks(ModelContainer& container) const override;

 private:
  LinearParams params_;
  Standardizer standardizer_;
  std::vector<double> history_;
};

// (lambda / 2) ||w||^2 + mean_i max(0, 1 - s_i (w.x_i + b)), s_i = +-1,
// lambda = 1 / (C n).
double hinge_objective(const LinearParams& params, const FeatureMatrix& x,
                       std::span<const Label> y, double c, LinearParams* subgradient);

class LinearSvmModel final : public TrainedModel {
 public:
  // Full-batch subgradient descent, step eta0 / sqrt(t); the best iterate
  // by objective is kept.
  static std::unique_ptr<LinearSvmModel> fit(const ModelSpec& spec, const FeatureMatrix& x,
                                             std::span<const Label> y);
  static std::unique_ptr<LinearSvmModel> from_container(const ModelContainer& c);

  LinearSvmModel(std::size_t dims, std::string layout, std::uint64_t seed, LinearParams params,
                 Standardizer standardizer);

  const LinearParams& params() const { return params_; }

 protected:
  double score(const FeatureRow& row) const override;
  double threshold() const override { return 0.0; }
  void write_blocks(ModelContainer& container) const override;

 private:
  LinearParams params_;
  Standardizer standardizer_;
};

// ---------------------------------------------------------------------------
// Gaussian naive Bayes

class GaussianNbModel final : public TrainedModel {
 public:
  static std::unique_ptr<GaussianNbModel> fit(const ModelSpec& spec, const FeatureMatrix& x,
                                              std::span<const Label> y);
  static std::unique_ptr<GaussianNbModel> from_container(const ModelContainer& c);

  GaussianNbModel(std::size_t dims, std::string layout, std::uint64_t seed,
                  std::array<double, 2> log_prior, std::vector<double> mean,
                  std::vector<double> variance);

  // Posterior (P(Informative), P(NotInformative)).
  std::array<double, 2> posterior(const FeatureRow& row) const;
  // Rows: class index (0 = Informative); columns: features.
  const std::vector<double>& mean() const { return mean_; }
  const std::vector<double>& variance() const { return variance_; }
  const std::array<double, 2>& log_prior() const { return log_prior_; }

 protected:
  double score(const FeatureRow& row) const override;
  void write_blocks(ModelContainer& container) const override;

 private:
  void precompute();

  std::array<double, 2> log_prior_;
  std::vector<double> mean_;
  std::vector<double> variance_;
  std::array<double, 2> zero_row_loglik_{};
};

// ---------------------------------------------------------------------------
// Trees

struct SplitResult {
  bool valid = false;  // false when the column has a single distinct value
  double threshold = 0.0;
  double gain = 0.0;
};

// Gini-gain maximizing threshold over midpoints of sorted distinct values;
// values <= threshold go left. Ties keep the smaller threshold.
SplitResult best_split(std::span<const double> column, std::span<const Label> labels);
// Same with per-sample weights (bootstrap multiplicities).
SplitResult best_split_weighted(std::span<const double> column, std::span<const Label> labels,
                                std::span<const double> weights);

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  double positive_fraction = 0.0;  // weighted Informative share of the node's samples
};

struct TreeOptions {
  std::size_t max_depth = 0;  // 0 = unlimited
  std::size_t min_samples_split = 2;
  std::size_t max_features = 0;  // 0 = all features
};

class Tree {
 public:
  Tree() = default;
  explicit Tree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

  // Samples carry non-negative weights; zero-weight rows are ignored.
  static Tree grow(const FeatureMatrix& x, std::span<const Label> y,
                   std::span<const double> weights, const TreeOptions& options, Rng& rng);

  double leaf_fraction(const FeatureRow& row) const;
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::size_t depth() const;

  std::vector<double> to_block() const;  // nodes x 5
  static Tree from_block(const std::vector<double>& block, std::size_t rows);

 private:
  std::vector<TreeNode> nodes_;
};

class DecisionTreeModel final : public TrainedModel {
 public:
  static std::unique_ptr<DecisionTreeModel> fit(const ModelSpec& spec, const FeatureMatrix& x,
                                                std::span<const Label> y);
  static std::unique_ptr<DecisionTreeModel> from_container(const ModelContainer& c);

  DecisionTreeModel(std::size_t dims, std::string layout, std::uint64_t seed, Tree tree);
  const Tree& tree() const { return tree_; }

 protected:
  double score(const FeatureRow& row) const override;
  void write_blocks(ModelContainer& container) const override;

 private:
  Tree tree_;
};

class RandomForestModel final : public TrainedModel {
 public:
  // Tree i is grown from seed + i; with threads > 1 trees grow concurrently.
  static std::unique_ptr<RandomForestModel> fit(const ModelSpec& spec, const FeatureMatrix& x,
                                                std::span<const Label> y, std::size_t threads = 1);
  static std::unique_ptr<RandomForestModel> from_container(const ModelContainer& c);

  RandomForestModel(std::size_t dims, std::string layout, std::uint64_t seed,
                    std::vector<Tree> trees);
  const std::vector<Tree>& trees() const { return trees_; }

 protected:
  double score(const FeatureRow& row) const override;
  void write_blocks(ModelContainer& container) const override;

 private:
  std::vector<Tree> trees_;
};

// ---------------------------------------------------------------------------
// Multilayer perceptron: one ReLU hidden layer, two-way softmax output.

struct MlpParams {
  std::size_t inputs = 0;
  std::size_t hidden = 0;
  std::vector<double> w1;  // hidden x inputs
  std::vector<double> b1;  // hidden
  std::vector<double> w2;  // 2 x hidden
  std::vector<double> b2;  // 2

  static MlpParams zeros(std::size_t inputs, std::size_t hidden);
  std::size_t size() const { return w1.size() + b1.size() + w2.size() + b2.size(); }
};

// Mean cross-entropy over the given rows plus alpha * ||W||^2 / (2 * rows).
double mlp_objective(const MlpParams& params, const FeatureMatrix& x, std::span<const Label> y,
                     std::span<const std::size_t> rows, double alpha, MlpParams* grad);
std::array<double, 2> mlp_forward(const MlpParams& params, const FeatureRow& row);

class MlpModel final : public TrainedModel {
 public:
  // Mini-batch Adam; stops early when the epoch loss fails to improve by tol
  // for n_iter_no_change consecutive epochs.
  static std::unique_ptr<MlpModel> fit(const ModelSpec& spec, const FeatureMatrix& x,
                                       std::span<const Label> y);
  static std::unique_ptr<MlpModel> from_container(const ModelContainer& c);

  MlpModel(std::size_t dims, std::string layout, std::uint64_t seed, MlpParams params,
           Standardizer standardizer);

  const MlpParams& params() const { return params_; }
  const std::vector<double>& loss_history() const { return history_; }

 protected:
  double score(const FeatureRow& row) const override;
  void write_blocks(ModelContainer& container) const override;

 private:
  MlpParams params_;
  Standardizer standardizer_;
  std::vector<double> history_;
};

// Validation shared by every learner: non-empty, aligned, both classes.
void check_training_data(const FeatureMatrix& x, std::span<const Label> y);

}  // namespace infotweet
