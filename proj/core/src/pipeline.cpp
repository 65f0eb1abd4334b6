#include "infotweet/pipeline.hpp"

#include <ostream>

#include "infotweet/error.hpp"
#include "infotweet/features.hpp"

namespace infotweet {
namespace {

struct FeatureSetName {
  FeatureSet set;
  std::string_view name;
};

constexpr FeatureSetName kFeatureSetNames[] = {
    {FeatureSet::kHandcrafted, "handcrafted"},
    {FeatureSet::kBow, "bow"},
    {FeatureSet::kHandcraftedBow, "handcrafted+bow"},
    {FeatureSet::kWordEmbeddings, "word-embeddings"},
    {FeatureSet::kSentenceVectors, "sentence-vectors"},
    {FeatureSet::kHandcraftedSentenceVectors, "handcrafted+sentence-vectors"},
};

}  // namespace

std::string_view feature_set_name(FeatureSet set) {
  for (const auto& entry : kFeatureSetNames) {
    if (entry.set == set) return entry.name;
  }
  return "unknown";
}

FeatureSet parse_feature_set(std::string_view name) {
  for (const auto& entry : kFeatureSetNames) {
    if (entry.name == name) return entry.set;
  }
  std::string known;
  for (const auto& entry : kFeatureSetNames) {
    if (!known.empty()) known += ", ";
    known += entry.name;
  }
  throw ConfigError("unknown feature set '" + std::string(name) + "' (expected one of " + known + ")");
}

bool uses_handcrafted(FeatureSet set) {
  return set == FeatureSet::kHandcrafted || set == FeatureSet::kHandcraftedBow ||
         set == FeatureSet::kHandcraftedSentenceVectors;
}

bool uses_bow(FeatureSet set) { return set == FeatureSet::kBow || set == FeatureSet::kHandcraftedBow; }

bool uses_word_vectors(FeatureSet set) { return set == FeatureSet::kWordEmbeddings; }

bool uses_sentence_vectors(FeatureSet set) {
  return set == FeatureSet::kSentenceVectors || set == FeatureSet::kHandcraftedSentenceVectors;
}

std::string PipelineSpec::model_name() const {
  return hybrid ? std::string("hybrid") : std::string(model_kind_id(model.kind()));
}

std::vector<std::string> PipelineSpec::problems(const Resources& resources) const {
  std::vector<std::string> out;
  if (hybrid && features != FeatureSet::kHandcraftedSentenceVectors) {
    out.push_back("the hybrid model requires the handcrafted+sentence-vectors feature set, not '" +
                  std::string(feature_set_name(features)) + "'");
  }
  if (uses_word_vectors(features) && !resources.word_vectors) {
    out.push_back("feature set '" + std::string(feature_set_name(features)) +
                  "' needs a word-vector file");
  }
  if (uses_sentence_vectors(features) && !resources.sentence_vectors) {
    out.push_back("feature set '" + std::string(feature_set_name(features)) +
                  "' needs a sentence-vector file");
  }
  if (model_threads == 0) out.push_back("model threads must be at least 1");
  if (hybrid) {
    try {
      hybrid_settings.validate();
    } catch (const ConfigError& e) {
      out.emplace_back(e.what());
    }
    if (hybrid_config.handcrafted_width == 0 || hybrid_config.encoder_width == 0) {
      out.emplace_back("hybrid branch widths must be at least 1");
    }
  }
  return out;
}

std::string feature_layout(FeatureSet set, std::size_t handcrafted_dims, std::size_t sparse_dims,
                           std::size_t embedding_dims) {
  std::string out;
  auto part = [&out](const std::string& p) {
    if (!out.empty()) out += '+';
    out += p;
  };
  if (uses_handcrafted(set)) {
    part(std::string(kHandcraftedLayoutVersion) + ":" + std::to_string(handcrafted_dims));
  }
  if (uses_word_vectors(set)) part("wordvec-mean:" + std::to_string(embedding_dims));
  if (uses_sentence_vectors(set)) part("sentvec:" + std::to_string(embedding_dims));
  if (uses_bow(set)) part("tfidf:" + std::to_string(sparse_dims));
  return out;
}

PreparedPipeline::PreparedPipeline(const Dataset& dataset, PipelineSpec spec,
                                   const Resources& resources)
    : dataset_(dataset), spec_(std::move(spec)) {
  const std::vector<std::string> issues = spec_.problems(resources);
  if (!issues.empty()) {
    std::string message = issues.front();
    for (std::size_t i = 1; i < issues.size(); ++i) message += "; " + issues[i];
    throw ConfigError(message);
  }
  if (dataset_.size() == 0) throw DataError("dataset '" + dataset_.name() + "' has no records");
  const auto& records = dataset_.records();
  if (uses_handcrafted(spec_.features)) {
    handcrafted_.reserve(records.size());
    for (const TweetRecord& r : records) {
      handcrafted_.push_back(
          handcrafted_features(r, resources.slang, resources.interjections).values);
    }
    handcrafted_dims_ = handcrafted_.front().size();
  }
  if (uses_bow(spec_.features) || uses_word_vectors(spec_.features)) {
    tokens_.reserve(records.size());
    for (const TweetRecord& r : records) tokens_.push_back(analyze(r.text));
  }
  if (uses_word_vectors(spec_.features)) {
    const WordVectorTable& table = *resources.word_vectors;
    embedding_dims_ = table.dimension();
    embedding_.reserve(records.size());
    for (const TokenList& t : tokens_) embedding_.push_back(average_embed(t, table));
    if (!uses_bow(spec_.features)) tokens_.clear();
  }
  if (uses_sentence_vectors(spec_.features)) {
    const SentenceVectorTable& table = *resources.sentence_vectors;
    embedding_dims_ = table.dimension();
    embedding_.reserve(records.size());
    for (const TweetRecord& r : records) {
      const double* v = table.find(r.id);
      if (v == nullptr) {
        throw DataError("no sentence vector for record '" + r.id + "' of dataset '" +
                        dataset_.name() + "'");
      }
      embedding_.emplace_back(v, v + table.dimension());
    }
  }
  if (uses_bow(spec_.features) && !spec_.fold_safe_vocab) {
    std::vector<std::size_t> all(records.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    corpus_vocab_ = fit_vocabulary(all);
  }
  if (spec_.hybrid) {
    spec_.hybrid_config.handcrafted_dim = handcrafted_dims_;
    spec_.hybrid_config.encoder_dim = embedding_dims_;
  }
}

Vocabulary PreparedPipeline::fit_vocabulary(std::span<const std::size_t> rows) const {
  if (!uses_bow(spec_.features)) return {};
  std::vector<TokenList> corpus;
  corpus.reserve(rows.size());
  for (const std::size_t i : rows) corpus.push_back(tokens_[i]);
  return build_vocab(corpus, spec_.vocab);
}

Vocabulary PreparedPipeline::vocabulary_for(std::span<const std::size_t> train_rows) const {
  if (!uses_bow(spec_.features)) return {};
  return spec_.fold_safe_vocab ? fit_vocabulary(train_rows) : corpus_vocab_;
}

FeatureMatrix PreparedPipeline::matrix(std::span<const std::size_t> rows,
                                       const Vocabulary& vocab) const {
  const bool bow = uses_bow(spec_.features);
  const std::size_t dense_cols = handcrafted_dims_ + embedding_dims_;
  const std::size_t sparse_cols = bow ? vocab.size() : 0;
  FeatureMatrix x(dense_cols, sparse_cols,
                  feature_layout(spec_.features, handcrafted_dims_, sparse_cols, embedding_dims_));
  std::vector<double> dense(dense_cols);
  for (const std::size_t i : rows) {
    std::size_t at = 0;
    if (!handcrafted_.empty()) {
      std::copy(handcrafted_[i].begin(), handcrafted_[i].end(), dense.begin());
      at = handcrafted_[i].size();
    }
    if (!embedding_.empty()) std::copy(embedding_[i].begin(), embedding_[i].end(), dense.begin() + at);
    if (bow) {
      x.add_row(dense, tfidf_transform(tokens_[i], vocab));
    } else {
      x.add_row(dense);
    }
  }
  return x;
}

HybridData PreparedPipeline::hybrid_data(std::span<const std::size_t> rows) const {
  HybridData data(handcrafted_dims_, embedding_dims_);
  const auto& records = dataset_.records();
  for (const std::size_t i : rows) data.add(handcrafted_[i], embedding_[i], records[i].label);
  return data;
}

HybridModel PreparedPipeline::fit_hybrid(std::span<const std::size_t> train) const {
  HybridData data = hybrid_data(train);
  // Handcrafted inputs are scaled with training-row statistics only.
  FeatureMatrix h(handcrafted_dims_, 0);
  for (const std::size_t i : train) h.add_row(handcrafted_[i]);
  Standardizer scaler = Standardizer::fit(h);
  std::span<double> values = data.mutable_h();
  for (std::size_t r = 0; r < data.size(); ++r) {
    std::span<double> row = values.subspan(r * handcrafted_dims_, handcrafted_dims_);
    std::vector<double> raw(row.begin(), row.end());
    scaler.apply(raw, row);
  }
  HybridParams params = train_hybrid(spec_.hybrid_config, spec_.hybrid_settings, data);
  return HybridModel(std::move(params), std::move(scaler),
                     feature_layout(spec_.features, handcrafted_dims_, 0, embedding_dims_));
}

std::vector<Label> PreparedPipeline::run_fold(std::span<const std::size_t> train,
                                              std::span<const std::size_t> test) const {
  const auto& records = dataset_.records();
  std::vector<Label> predicted;
  predicted.reserve(test.size());
  if (spec_.hybrid) {
    const HybridModel model = fit_hybrid(train);
    for (const std::size_t i : test) predicted.push_back(model.predict(handcrafted_[i], embedding_[i]));
    return predicted;
  }
  const Vocabulary vocab = vocabulary_for(train);
  const FeatureMatrix x_train = matrix(train, vocab);
  std::vector<Label> y_train;
  y_train.reserve(train.size());
  for (const std::size_t i : train) y_train.push_back(records[i].label);
  const auto model = infotweet::train(spec_.model, x_train, y_train, spec_.model_threads);
  const FeatureMatrix x_test = matrix(test, vocab);
  for (std::size_t r = 0; r < x_test.rows(); ++r) predicted.push_back(model->predict(x_test.row(r)));
  return predicted;
}

FoldRunner PreparedPipeline::runner() const {
  return [this](std::size_t, std::span<const std::size_t> train, std::span<const std::size_t> test) {
    return run_fold(train, test);
  };
}

void PreparedPipeline::train_all(std::ostream& model_out, Vocabulary* vocab_out) const {
  std::vector<std::size_t> all(dataset_.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  if (spec_.hybrid) {
    fit_hybrid(all).save(model_out);
    return;
  }
  const Vocabulary vocab = vocabulary_for(all);
  const FeatureMatrix x = matrix(all, vocab);
  const auto model = train(spec_.model, x, dataset_.labels(), spec_.model_threads);
  model->save(model_out);
  if (vocab_out != nullptr && uses_bow(spec_.features)) *vocab_out = vocab;
}

CVReport cross_validate_pipeline(const Dataset& dataset, const PipelineSpec& spec,
                                 const Resources& resources, const CrossValidationSettings& cv) {
  const PreparedPipeline prepared(dataset, spec, resources);
  const FoldPlan plan = make_folds(dataset, cv.k, cv.seed, cv.stratified);
  RunMetadata metadata;
  metadata.pipeline = spec.name.empty()
                          ? std::string(feature_set_name(spec.features)) + "/" + spec.model_name()
                          : spec.name;
  metadata.dataset = dataset.name();
  metadata.feature_set = std::string(feature_set_name(spec.features));
  metadata.model = spec.model_name();
  metadata.seed = cv.seed;
  return cross_validate(dataset, plan, prepared.runner(), std::move(metadata), cv.threads);
}

}  // namespace infotweet
