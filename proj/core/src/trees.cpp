#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "infotweet/models.hpp"
#include "model_common.hpp"

namespace infotweet {

namespace {

double gini(double w_pos, double w_neg) {
  const double total = w_pos + w_neg;
  if (total <= 0.0) return 0.0;
  const double p = w_pos / total;
  const double q = w_neg / total;
  return 1.0 - p * p - q * q;
}

double midpoint(double a, double b) {
  double mid = a + (b - a) / 2.0;
  if (!std::isfinite(mid)) mid = a / 2.0 + b / 2.0;
  if (mid >= b) mid = a;
  return mid;
}

// Per-column access to the samples of one node.
class ColumnStore {
 public:
  explicit ColumnStore(const FeatureMatrix& x) : x_(x), dense_cols_(x.dense_cols()) {
    const std::size_t n = x.rows();
    dense_.resize(n * dense_cols_);
    const auto data = x.dense_data();
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < dense_cols_; ++c) dense_[c * n + r] = data[r * dense_cols_ + c];
    }
    if (x.sparse_cols() > 0) {
      offsets_.assign(x.sparse_cols() + 1, 0);
      for (std::size_t r = 0; r < n; ++r) {
        for (const std::uint32_t j : x.row(r).sparse_index) ++offsets_[j + 1];
      }
      std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
      rows_.resize(offsets_.back());
      values_.resize(offsets_.back());
      std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
      for (std::size_t r = 0; r < n; ++r) {
        const FeatureRow row = x.row(r);
        for (std::size_t k = 0; k < row.sparse_index.size(); ++k) {
          const std::size_t pos = fill[row.sparse_index[k]]++;
          rows_[pos] = r;
          values_[pos] = row.sparse_value[k];
        }
      }
    }
    position_.assign(n, kAbsent);
  }

  void enter(std::span<const std::size_t> samples) {
    for (std::size_t k = 0; k < samples.size(); ++k) position_[samples[k]] = k;
  }
  void leave(std::span<const std::size_t> samples) {
    for (const std::size_t s : samples) position_[s] = kAbsent;
  }

  void gather(std::size_t feature, std::span<const std::size_t> samples, std::vector<double>& out) {
    out.resize(samples.size());
    const std::size_t n = x_.rows();
    if (feature < dense_cols_) {
      const double* col = dense_.data() + feature * n;
      for (std::size_t k = 0; k < samples.size(); ++k) out[k] = col[samples[k]];
      return;
    }
    const std::size_t j = feature - dense_cols_;
    const std::size_t nnz = offsets_[j + 1] - offsets_[j];
    if (samples.size() * 4 < nnz) {
      for (std::size_t k = 0; k < samples.size(); ++k) out[k] = x_.row(samples[k]).at(feature);
      return;
    }
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t p = offsets_[j]; p < offsets_[j + 1]; ++p) {
      const std::size_t pos = position_[rows_[p]];
      if (pos != kAbsent) out[pos] = values_[p];
    }
  }

 private:
  static constexpr std::size_t kAbsent = std::numeric_limits<std::size_t>::max();
  const FeatureMatrix& x_;
  std::size_t dense_cols_;
  std::vector<double> dense_;  // column-major
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> rows_;
  std::vector<double> values_;
  std::vector<std::size_t> position_;
};

TreeOptions tree_options(const ModelSpec& spec) {
  TreeOptions options;
  options.max_depth = static_cast<std::size_t>(spec.param("max_depth"));
  options.min_samples_split = static_cast<std::size_t>(spec.param("min_samples_split"));
  return options;
}

}  // namespace

constexpr double kGainTieTolerance = 1e-12;

SplitResult best_split_weighted(std::span<const double> column, std::span<const Label> labels,
                                std::span<const double> weights) {
  const std::size_t n = column.size();
  if (labels.size() != n || weights.size() != n) throw DimensionError("best_split input size mismatch");
  SplitResult best;
  if (n < 2) return best;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return column[a] < column[b]; });

  double total_pos = 0.0;
  double total_neg = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    (labels[i] == Label::kInformative ? total_pos : total_neg) += weights[i];
  }
  const double total = total_pos + total_neg;
  const double parent = gini(total_pos, total_neg);

  double left_pos = 0.0;
  double left_neg = 0.0;
  double best_gain = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const std::size_t i = order[k];
    (labels[i] == Label::kInformative ? left_pos : left_neg) += weights[i];
    const double a = column[i];
    const double b = column[order[k + 1]];
    if (!(a < b)) continue;
    const double right_pos = total_pos - left_pos;
    const double right_neg = total_neg - left_neg;
    const double left_w = left_pos + left_neg;
    const double right_w = right_pos + right_neg;
    const double gain = parent - (left_w / total) * gini(left_pos, left_neg) -
                        (right_w / total) * gini(right_pos, right_neg);
    // Gains within rounding noise count as ties and keep the smaller threshold.
    if (gain > best_gain + kGainTieTolerance) {
      best_gain = gain;
      best.valid = true;
      best.threshold = midpoint(a, b);
      best.gain = gain;
    }
  }
  return best;
}

SplitResult best_split(std::span<const double> column, std::span<const Label> labels) {
  const std::vector<double> ones(column.size(), 1.0);
  return best_split_weighted(column, labels, ones);
}

Tree Tree::grow(const FeatureMatrix& x, std::span<const Label> y, std::span<const double> weights,
                const TreeOptions& options, Rng& rng) {
  if (x.rows() != y.size() || weights.size() != y.size()) {
    throw DimensionError("tree training input size mismatch");
  }
  ColumnStore columns(x);
  const std::size_t d = x.cols();
  const std::size_t max_features =
      options.max_features == 0 ? d : std::min(options.max_features, d);

  struct Pending {
    std::int32_t node;
    std::vector<std::size_t> samples;
    std::size_t depth;
  };

  std::vector<TreeNode> nodes;
  std::vector<Pending> stack;
  {
    std::vector<std::size_t> root;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (weights[i] > 0.0) root.push_back(i);
    }
    if (root.empty()) throw DataError("tree has no samples with positive weight");
    nodes.emplace_back();
    stack.push_back({0, std::move(root), 0});
  }

  std::vector<double> values;
  std::vector<Label> node_labels;
  std::vector<double> node_weights;
  std::vector<std::size_t> features(d);

  while (!stack.empty()) {
    Pending item = std::move(stack.back());
    stack.pop_back();
    const std::vector<std::size_t>& samples = item.samples;

    double w_pos = 0.0;
    double w_neg = 0.0;
    node_labels.resize(samples.size());
    node_weights.resize(samples.size());
    for (std::size_t k = 0; k < samples.size(); ++k) {
      node_labels[k] = y[samples[k]];
      node_weights[k] = weights[samples[k]];
      (node_labels[k] == Label::kInformative ? w_pos : w_neg) += node_weights[k];
    }
    nodes[item.node].positive_fraction = w_pos / (w_pos + w_neg);

    const bool pure = w_pos == 0.0 || w_neg == 0.0;
    const bool depth_capped = options.max_depth > 0 && item.depth >= options.max_depth;
    if (pure || depth_capped || samples.size() < options.min_samples_split) continue;

    std::iota(features.begin(), features.end(), std::size_t{0});
    const bool sample_features = max_features < d;
    columns.enter(samples);
    std::int64_t best_feature = -1;
    SplitResult best;
    std::size_t visited = 0;
    for (std::size_t f = 0; f < d; ++f) {
      if (sample_features) {
        if (visited >= max_features) break;
        const std::size_t pick = f + rng.uniform_index(d - f);
        std::swap(features[f], features[pick]);
      }
      const std::size_t feature = features[f];
      columns.gather(feature, samples, values);
      const SplitResult split = best_split_weighted(values, node_labels, node_weights);
      if (!split.valid) continue;
      ++visited;
      const bool better = best_feature < 0 || split.gain > best.gain ||
                          (split.gain == best.gain && static_cast<std::int64_t>(feature) < best_feature);
      if (better) {
        best = split;
        best_feature = static_cast<std::int64_t>(feature);
      }
    }
    if (best_feature < 0) {
      columns.leave(samples);
      continue;
    }
    columns.gather(static_cast<std::size_t>(best_feature), samples, values);
    columns.leave(samples);

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (std::size_t k = 0; k < samples.size(); ++k) {
      (values[k] <= best.threshold ? left : right).push_back(samples[k]);
    }
    const auto left_id = static_cast<std::int32_t>(nodes.size());
    const auto right_id = left_id + 1;
    nodes.emplace_back();
    nodes.emplace_back();
    TreeNode& node = nodes[item.node];
    node.feature = static_cast<std::int32_t>(best_feature);
    node.threshold = best.threshold;
    node.left = left_id;
    node.right = right_id;
    stack.push_back({right_id, std::move(right), item.depth + 1});
    stack.push_back({left_id, std::move(left), item.depth + 1});
  }
  return Tree(std::move(nodes));
}

double Tree::leaf_fraction(const FeatureRow& row) const {
  std::int32_t id = 0;
  while (nodes_[id].feature >= 0) {
    const TreeNode& node = nodes_[id];
    id = row.at(static_cast<std::size_t>(node.feature)) <= node.threshold ? node.left : node.right;
  }
  return nodes_[id].positive_fraction;
}

std::size_t Tree::depth() const {
  std::size_t best = 0;
  std::vector<std::pair<std::int32_t, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    const auto [id, depth] = stack.back();
    stack.pop_back();
    best = std::max(best, depth);
    if (nodes_[id].feature >= 0) {
      stack.emplace_back(nodes_[id].left, depth + 1);
      stack.emplace_back(nodes_[id].right, depth + 1);
    }
  }
  return best;
}

std::vector<double> Tree::to_block() const {
  std::vector<double> block;
  block.reserve(nodes_.size() * 5);
  for (const TreeNode& n : nodes_) {
    block.insert(block.end(), {static_cast<double>(n.feature), n.threshold,
                               static_cast<double>(n.left), static_cast<double>(n.right),
                               n.positive_fraction});
  }
  return block;
}

Tree Tree::from_block(const std::vector<double>& block, std::size_t rows) {
  if (block.size() != rows * 5 || rows == 0) throw ParseError("tree block must be non-empty N x 5");
  std::vector<TreeNode> nodes(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    const double* b = block.data() + i * 5;
    nodes[i] = {static_cast<std::int32_t>(b[0]), b[1], static_cast<std::int32_t>(b[2]),
                static_cast<std::int32_t>(b[3]), b[4]};
    const auto limit = static_cast<std::int32_t>(rows);
    if (nodes[i].feature >= 0 && (nodes[i].left <= static_cast<std::int32_t>(i) ||
                                  nodes[i].right <= static_cast<std::int32_t>(i) ||
                                  nodes[i].left >= limit || nodes[i].right >= limit)) {
      throw ParseError("tree block has an invalid child index");
    }
  }
  return Tree(std::move(nodes));
}

DecisionTreeModel::DecisionTreeModel(std::size_t dims, std::string layout, std::uint64_t seed,
                                     Tree tree)
    : TrainedModel(ModelKind::kDecisionTree, dims, std::move(layout), seed), tree_(std::move(tree)) {}

std::unique_ptr<DecisionTreeModel> DecisionTreeModel::fit(const ModelSpec& spec,
                                                          const FeatureMatrix& x,
                                                          std::span<const Label> y) {
  check_training_data(x, y);
  const std::vector<double> weights(x.rows(), 1.0);
  Rng rng(spec.seed());
  Tree tree = Tree::grow(x, y, weights, tree_options(spec), rng);
  return std::make_unique<DecisionTreeModel>(x.cols(), x.layout(), spec.seed(), std::move(tree));
}

double DecisionTreeModel::score(const FeatureRow& row) const { return tree_.leaf_fraction(row); }

void DecisionTreeModel::write_blocks(ModelContainer& c) const {
  c.add_block("tree", tree_.nodes().size(), 5, tree_.to_block());
}

std::unique_ptr<DecisionTreeModel> DecisionTreeModel::from_container(const ModelContainer& c) {
  const detail::ModelHeader h = detail::read_header(c);
  const NamedBlock& b = c.block("tree");
  if (b.cols != 5) throw ParseError("tree block must have 5 columns");
  return std::make_unique<DecisionTreeModel>(h.dims, h.layout, h.seed, Tree::from_block(b.values, b.rows));
}

RandomForestModel::RandomForestModel(std::size_t dims, std::string layout, std::uint64_t seed,
                                     std::vector<Tree> trees)
    : TrainedModel(ModelKind::kRandomForest, dims, std::move(layout), seed),
      trees_(std::move(trees)) {
  if (trees_.empty()) throw DataError("random forest needs at least one tree");
}

std::unique_ptr<RandomForestModel> RandomForestModel::fit(const ModelSpec& spec,
                                                          const FeatureMatrix& x,
                                                          std::span<const Label> y,
                                                          std::size_t threads) {
  check_training_data(x, y);
  const auto n_trees = static_cast<std::size_t>(spec.param("n_estimators"));
  const bool bootstrap = spec.param("bootstrap") != 0.0;
  TreeOptions options = tree_options(spec);
  const auto max_features = static_cast<std::size_t>(spec.param("max_features"));
  options.max_features =
      max_features == 0
          ? std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(x.cols()))))
          : max_features;

  std::vector<Tree> trees(n_trees);
  auto grow_one = [&](std::size_t t) {
    Rng rng(spec.seed() + t);
    std::vector<double> weights(x.rows(), bootstrap ? 0.0 : 1.0);
    if (bootstrap) {
      for (std::size_t i = 0; i < x.rows(); ++i) weights[rng.uniform_index(x.rows())] += 1.0;
    }
    trees[t] = Tree::grow(x, y, weights, options, rng);
  };

  threads = std::max<std::size_t>(1, std::min(threads, n_trees));
  if (threads == 1) {
    for (std::size_t t = 0; t < n_trees; ++t) grow_one(t);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (std::size_t w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t t = w; t < n_trees; t += threads) grow_one(t);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (std::thread& th : pool) th.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  return std::make_unique<RandomForestModel>(x.cols(), x.layout(), spec.seed(), std::move(trees));
}

double RandomForestModel::score(const FeatureRow& row) const {
  std::size_t votes = 0;
  for (const Tree& tree : trees_) votes += tree.leaf_fraction(row) > 0.5 ? 1 : 0;
  return static_cast<double>(votes) / static_cast<double>(trees_.size());
}

void RandomForestModel::write_blocks(ModelContainer& c) const {
  c.set("trees", std::to_string(trees_.size()));
  for (std::size_t t = 0; t < trees_.size(); ++t) {
    c.add_block("tree_" + std::to_string(t), trees_[t].nodes().size(), 5, trees_[t].to_block());
  }
}

std::unique_ptr<RandomForestModel> RandomForestModel::from_container(const ModelContainer& c) {
  const detail::ModelHeader h = detail::read_header(c);
  const std::size_t n = detail::read_size(c, "trees");
  std::vector<Tree> trees;
  trees.reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    const NamedBlock& b = c.block("tree_" + std::to_string(t));
    if (b.cols != 5) throw ParseError("tree block must have 5 columns");
    trees.push_back(Tree::from_block(b.values, b.rows));
  }
  return std::make_unique<RandomForestModel>(h.dims, h.layout, h.seed, std::move(trees));
}

}  // namespace infotweet
