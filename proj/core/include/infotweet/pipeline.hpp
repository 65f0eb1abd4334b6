#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "infotweet/bow.hpp"
#include "infotweet/corpus.hpp"
#include "infotweet/embeddings.hpp"
#include "infotweet/eval.hpp"
#include "infotweet/feature_matrix.hpp"
#include "infotweet/hybrid.hpp"
#include "infotweet/models.hpp"
#include "infotweet/textproc.hpp"

namespace infotweet {

enum class FeatureSet {
  kHandcrafted,
  kBow,
  kHandcraftedBow,
  kWordEmbeddings,
  kSentenceVectors,
  kHandcraftedSentenceVectors,
};

// handcrafted, bow, handcrafted+bow, word-embeddings, sentence-vectors,
// handcrafted+sentence-vectors
std::string_view feature_set_name(FeatureSet set);
FeatureSet parse_feature_set(std::string_view name);  // throws ConfigError

bool uses_handcrafted(FeatureSet set);
bool uses_bow(FeatureSet set);
bool uses_word_vectors(FeatureSet set);
bool uses_sentence_vectors(FeatureSet set);

// External resources a pipeline may draw on. Lexicons default to empty.
struct Resources {
  Lexicon slang{LexiconKind::kSlang, {}};
  Lexicon interjections{LexiconKind::kInterjection, {}};
  std::optional<WordVectorTable> word_vectors;
  std::optional<SentenceVectorTable> sentence_vectors;
};

struct PipelineSpec {
  std::string name;
  FeatureSet features = FeatureSet::kHandcrafted;
  // Classical model; ignored when hybrid is set.
  ModelSpec model{ModelKind::kLogisticRegression};
  // Two-branch head over handcrafted + sentence vectors. The input
  // dimensions of hybrid_config are taken from the data.
  bool hybrid = false;
  HybridConfig hybrid_config;
  TrainSettings hybrid_settings;
  VocabOptions vocab;
  // Fit the vocabulary on each training fold instead of the whole corpus.
  bool fold_safe_vocab = false;
  // Worker threads inside a single model fit (random forests only).
  std::size_t model_threads = 1;

  std::string model_name() const;  // model kind id or "hybrid"

  // Every problem with this spec given the resources; empty when valid.
  std::vector<std::string> problems(const Resources& resources) const;
};

// Layout tag stored in model files, e.g. "handcrafted-v1:16+tfidf:812".
std::string feature_layout(FeatureSet set, std::size_t handcrafted_dims, std::size_t sparse_dims,
                           std::size_t embedding_dims);

// Per-record features computed once, then assembled per fold.
class PreparedPipeline {
 public:
  // Throws ConfigError when the spec is invalid for the resources, DataError
  // when a record has no sentence vector.
  PreparedPipeline(const Dataset& dataset, PipelineSpec spec, const Resources& resources);

  const PipelineSpec& spec() const { return spec_; }
  const Dataset& dataset() const { return dataset_; }
  std::size_t handcrafted_dims() const { return handcrafted_dims_; }

  // Vocabulary fitted on the given rows (empty when the set has no BoW).
  Vocabulary fit_vocabulary(std::span<const std::size_t> rows) const;
  // The vocabulary used for the given training rows: the corpus-wide one
  // unless fold-safe mode is on.
  Vocabulary vocabulary_for(std::span<const std::size_t> train_rows) const;

  // Feature matrix for the classical models over the given rows.
  FeatureMatrix matrix(std::span<const std::size_t> rows, const Vocabulary& vocab) const;

  // Trains on `train` and predicts `test`.
  std::vector<Label> run_fold(std::span<const std::size_t> train,
                              std::span<const std::size_t> test) const;
  FoldRunner runner() const;

  // Trains on every record and writes the model file. When the set uses
  // BoW and vocab_out is given, the fitted vocabulary is stored there.
  void train_all(std::ostream& model_out, Vocabulary* vocab_out = nullptr) const;

 private:
  HybridModel fit_hybrid(std::span<const std::size_t> train) const;
  HybridData hybrid_data(std::span<const std::size_t> rows) const;

  const Dataset& dataset_;
  PipelineSpec spec_;
  std::size_t handcrafted_dims_ = 0;
  std::size_t embedding_dims_ = 0;
  std::vector<std::vector<double>> handcrafted_;  // per record, when used
  std::vector<TokenList> tokens_;                 // per record, when BoW is used
  std::vector<std::vector<double>> embedding_;    // word or sentence vectors, when used
  Vocabulary corpus_vocab_;
};

struct CrossValidationSettings {
  std::size_t k = 10;
  std::uint64_t seed = 0;
  bool stratified = false;
  std::size_t threads = 1;  // folds run in parallel
};

CVReport cross_validate_pipeline(const Dataset& dataset, const PipelineSpec& spec,
                                 const Resources& resources, const CrossValidationSettings& cv);

}  // namespace infotweet
