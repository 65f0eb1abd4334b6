#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "infotweet/corpus.hpp"
#include "infotweet/feature_matrix.hpp"
#include "infotweet/model_io.hpp"

namespace infotweet {

// Two-branch classifier head. The handcrafted vector h and the encoder
// sentence vector e each pass through their own linear layer; the two
// outputs are concatenated and mapped to two logits by a third linear layer
// followed by a softmax (class 0 = Informative).
enum class BranchActivation { kRelu, kIdentity };

struct HybridConfig {
  std::size_t handcrafted_dim = 12;
  std::size_t encoder_dim = 768;
  std::size_t handcrafted_width = 32;
  std::size_t encoder_width = 128;
  BranchActivation activation = BranchActivation::kRelu;

  void validate() const;  // throws ConfigError
};

struct HybridParams {
  HybridConfig config;
  std::vector<double> w1;  // handcrafted_width x handcrafted_dim
  std::vector<double> b1;
  std::vector<double> w2;  // encoder_width x encoder_dim
  std::vector<double> b2;
  std::vector<double> w3;  // 2 x (handcrafted_width + encoder_width)
  std::vector<double> b3;

  static HybridParams zeros(const HybridConfig& config);
  // Uniform in +-1/sqrt(fan_in) per layer, biases included.
  static HybridParams initialize(const HybridConfig& config, std::uint64_t seed);

  // Blocks in the fixed order W1, b1, W2, b2, W3, b3.
  std::array<std::vector<double>*, 6> blocks();
  std::array<const std::vector<double>*, 6> blocks() const;
  static constexpr std::array<const char*, 6> kBlockNames = {"W1", "b1", "W2", "b2", "W3", "b3"};

  void write_blocks(ModelContainer& container) const;
  static HybridParams read_blocks(const ModelContainer& container, const HybridConfig& config);
};

struct TrainSettings {
  double learning_rate = 0.001;
  double momentum = 0.9;
  std::size_t epochs = 20;
  std::size_t batch_size = 16;
  std::uint64_t seed = 0;

  void validate() const;  // throws ConfigError
};

// Contiguous storage of (h, e, y) training triples.
class HybridData {
 public:
  HybridData(std::size_t handcrafted_dim, std::size_t encoder_dim)
      : handcrafted_dim_(handcrafted_dim), encoder_dim_(encoder_dim) {}

  void add(std::span<const double> h, std::span<const double> e, Label y);

  std::size_t size() const { return labels_.size(); }
  std::size_t handcrafted_dim() const { return handcrafted_dim_; }
  std::size_t encoder_dim() const { return encoder_dim_; }
  std::span<const double> h(std::size_t i) const {
    return std::span<const double>(h_).subspan(i * handcrafted_dim_, handcrafted_dim_);
  }
  std::span<const double> e(std::size_t i) const {
    return std::span<const double>(e_).subspan(i * encoder_dim_, encoder_dim_);
  }
  Label label(std::size_t i) const { return labels_[i]; }
  const std::vector<Label>& labels() const { return labels_; }
  std::span<double> mutable_h() { return h_; }

 private:
  std::size_t handcrafted_dim_;
  std::size_t encoder_dim_;
  std::vector<double> h_;
  std::vector<double> e_;
  std::vector<Label> labels_;
};

// Softmax probabilities (P(Informative), P(NotInformative)).
std::array<double, 2> forward(const HybridParams& params, std::span<const double> h,
                              std::span<const double> e);
// Raw logits before the softmax.
std::array<double, 2> hybrid_logits(const HybridParams& params, std::span<const double> h,
                                    std::span<const double> e);

// -ln p_true with p clamped at 1e-12.
double loss(const std::array<double, 2>& probs, Label y);

// Mean batch loss; grad receives the backpropagated gradient of that mean.
double gradients(const HybridParams& params, const HybridData& data,
                 std::span<const std::size_t> batch, HybridParams& grad);

// Mini-batch SGD with classical momentum (v = mu v - lr g; theta += v), a
// seeded shuffle per epoch, and the last partial batch kept. When
// epoch_losses is given it receives the mean training loss after each epoch.
HybridParams train_hybrid(const HybridConfig& config, const TrainSettings& settings,
                          const HybridData& data, std::vector<double>* epoch_losses = nullptr);

// Argmax of forward; a tie classifies as NotInformative.
Label predict_hybrid(const HybridParams& params, std::span<const double> h,
                     std::span<const double> e);
Label label_from_probs(const std::array<double, 2>& probs);

// Trained head plus the handcrafted-feature scaling fitted on its training rows.
class HybridModel {
 public:
  HybridModel(HybridParams params, Standardizer standardizer, std::string layout);

  const HybridParams& params() const { return params_; }
  const Standardizer& standardizer() const { return standardizer_; }
  const std::string& layout() const { return layout_; }

  // h is the raw (unscaled) handcrafted vector.
  std::array<double, 2> probabilities(std::span<const double> h, std::span<const double> e) const;
  Label predict(std::span<const double> h, std::span<const double> e) const;

  void save(std::ostream& out) const;
  static HybridModel load(std::istream& in);
  static HybridModel from_container(const ModelContainer& container);

 private:
  HybridParams params_;
  Standardizer standardizer_;
  std::string layout_;
};

}  // namespace infotweet
