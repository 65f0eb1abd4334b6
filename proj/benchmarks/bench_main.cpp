#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "infotweet/bow.hpp"
#include "infotweet/features.hpp"
#include "infotweet/hybrid.hpp"
#include "infotweet/models.hpp"
#include "infotweet/random.hpp"
#include "infotweet/textproc.hpp"

using namespace infotweet;

namespace {

const std::vector<std::string> kWords = {
    "flood", "water", "rising", "bridge", "closed", "#flood", "@council", "help", "evacuate",
    "lol", "wow", "road", "fire", "smoke", "stay", "safe", "http://t.co/x1", "RT", "news", "update"};

std::vector<std::string> random_tweets(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::string> out(n);
  for (std::string& t : out) {
    const std::size_t len = 5 + rng.uniform_index(20);
    for (std::size_t i = 0; i < len; ++i) t += (i ? " " : "") + kWords[rng.uniform_index(kWords.size())];
  }
  return out;
}

void BM_Analyze(benchmark::State& state) {
  const auto tweets = random_tweets(1000, 1);
  for (auto _ : state) {
    for (const std::string& t : tweets) benchmark::DoNotOptimize(analyze(t));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(tweets.size()));
}
BENCHMARK(BM_Analyze);

void BM_TextFeatures(benchmark::State& state) {
  const auto tweets = random_tweets(1000, 2);
  const std::vector<std::string> slang_terms{"lol"}, interj_terms{"wow"};
  const Lexicon slang(LexiconKind::kSlang, slang_terms);
  const Lexicon interj(LexiconKind::kInterjection, interj_terms);
  for (auto _ : state) {
    for (const std::string& t : tweets) benchmark::DoNotOptimize(text_features(t, slang, interj));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(tweets.size()));
}
BENCHMARK(BM_TextFeatures);

void BM_TfidfFitTransform(benchmark::State& state) {
  std::vector<TokenList> docs;
  for (const std::string& t : random_tweets(static_cast<std::size_t>(state.range(0)), 3)) {
    docs.push_back(analyze(t));
  }
  for (auto _ : state) {
    const Vocabulary vocab = build_vocab(docs);
    for (const TokenList& d : docs) benchmark::DoNotOptimize(tfidf_transform(d, vocab));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TfidfFitTransform)->Arg(1000)->Arg(10000);

void BM_HybridGradients(benchmark::State& state) {
  HybridConfig config;
  config.handcrafted_dim = 16;
  config.encoder_dim = 768;
  const HybridParams params = HybridParams::initialize(config, 1);
  Rng rng(4);
  HybridData data(16, 768);
  std::vector<double> h(16), e(768);
  for (int i = 0; i < 16; ++i) {
    for (double& v : h) v = rng.normal();
    for (double& v : e) v = rng.normal();
    data.add(h, e, i % 2 ? Label::kInformative : Label::kNotInformative);
  }
  std::vector<std::size_t> batch(16);
  for (std::size_t i = 0; i < 16; ++i) batch[i] = i;
  HybridParams grad;
  for (auto _ : state) benchmark::DoNotOptimize(gradients(params, data, batch, grad));
  state.SetItemsProcessed(state.iterations() * 16);
}
BENCHMARK(BM_HybridGradients);

void BM_DecisionTreeFit(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(5);
  FeatureMatrix x(16, 0);
  std::vector<Label> y;
  std::vector<double> row(16);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0;
    for (double& v : row) {
      v = rng.normal();
      s += v;
    }
    x.add_row(row);
    y.push_back(s + 0.5 * rng.normal() > 0 ? Label::kInformative : Label::kNotInformative);
  }
  for (auto _ : state) benchmark::DoNotOptimize(train(ModelSpec(ModelKind::kDecisionTree), x, y));
}
BENCHMARK(BM_DecisionTreeFit)->Arg(1000)->Arg(5000);

}  // namespace

BENCHMARK_MAIN();
