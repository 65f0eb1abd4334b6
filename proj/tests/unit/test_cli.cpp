#include <gtest/gtest.h>

#include <regex>
#include <sstream>

#include "commands.hpp"
#include "config.hpp"
#include "infotweet/error.hpp"
#include "infotweet/strings.hpp"
#include "support.hpp"

using namespace infotweet;
using namespace infotweet::testing;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliResult r;
  r.code = cli::run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

fs::path mini_dir() { return bundled_data_dir() / "mini_corpus"; }

// A config in `dir` pointing at the bundled mini corpus by absolute path.
fs::path write_config(const fs::path& dir, const std::string& extra) {
  const std::string text = "dataset.path = " + (mini_dir() / "mini_corpus.tsv").string() +
                           "\n"
                           "dataset.name = mini\n"
                           "resources.slang = " +
                           (bundled_data_dir() / "lexicons" / "slang.txt").string() +
                           "\n"
                           "resources.interjections = " +
                           (bundled_data_dir() / "lexicons" / "interjections.txt").string() +
                           "\n"
                           "seed = 7\n" +
                           extra;
  spit(dir / "run.conf", text);
  return dir / "run.conf";
}

std::size_t count_lines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace

TEST(RawConfig, ParsesCommentsAndLaterEntriesWin) {
  const cli::RawConfig raw = cli::RawConfig::parse(
      "# header\nseed = 3\n\ncv.k=5\nseed = 4\n", "x.conf", "/base");
  EXPECT_EQ(raw.entries().at("seed").value, "4");
  EXPECT_EQ(raw.entries().at("seed").origin, "x.conf:5");
  EXPECT_EQ(raw.entries().at("cv.k").value, "5");
  EXPECT_THROW(cli::RawConfig::parse("no equals sign\n", "x.conf", "."), ConfigError);
}

TEST(Interpret, CollectsEveryError) {
  cli::RawConfig raw;
  raw.set("dataset.path", "/does/not/exist.tsv", "test");
  raw.set("cv.k", "1", "test");
  raw.set("model.kind", "perceptron", "test");
  raw.set("colour", "blue", "test");
  const cli::ConfigCheck check = cli::interpret(raw, cli::Command::kCrossValidate);
  ASSERT_GE(check.errors.size(), 4u);
  const std::string all = join(check.errors, "\n");
  EXPECT_NE(all.find("/does/not/exist.tsv"), std::string::npos) << all;
  EXPECT_NE(all.find("cv.k"), std::string::npos) << all;
  EXPECT_NE(all.find("perceptron"), std::string::npos) << all;
  EXPECT_NE(all.find("colour"), std::string::npos) << all;
}

TEST(Interpret, RelativePathsResolveAgainstConfigDir) {
  const cli::RawConfig raw = cli::RawConfig::load(mini_dir() / "hybrid.conf");
  const cli::ConfigCheck check = cli::interpret(raw, cli::Command::kCrossValidate);
  ASSERT_TRUE(check.errors.empty()) << join(check.errors, "\n");
  EXPECT_TRUE(fs::exists(check.config.dataset_path));
  EXPECT_TRUE(check.config.pipeline.hybrid);
  EXPECT_EQ(check.config.pipeline.hybrid_settings.epochs, 20u);
  EXPECT_EQ(check.config.cv_k, 10u);
  EXPECT_EQ(check.config.seed, 7u);
}

TEST(Interpret, HybridSettingsNeedHybridModel) {
  TempDir dir("cli");
  const cli::RawConfig raw =
      cli::RawConfig::load(write_config(dir.path(), "model.kind = lr\nhybrid.epochs = 3\n"));
  EXPECT_FALSE(cli::interpret(raw, cli::Command::kTrain).errors.empty());
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, cli::kExitUsage);
  EXPECT_EQ(run({"bogus"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"featurize"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"--help"}).code, cli::kExitOk);
}

TEST(Cli, FeaturizeWritesOneRowPerRecord) {
  TempDir dir("cli");
  const fs::path conf = write_config(dir.path(), "");
  const CliResult r = run({"featurize", "--config", conf.string(), "--out-dir", dir.path().string()});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const std::string text = slurp(dir.path() / "features.tsv");
  EXPECT_EQ(count_lines(text), 201u);  // header + 200 records
  EXPECT_EQ(text.rfind("id\t", 0), 0u);
}

TEST(Cli, FeaturizeHundredRecordsIsByteStable) {
  TempDir dir("cli");
  const std::string corpus = slurp(mini_dir() / "mini_corpus.tsv");
  std::size_t end = 0;
  for (int line = 0; line < 101; ++line) end = corpus.find('\n', end) + 1;
  spit(dir.path() / "hundred.tsv", corpus.substr(0, end));
  const fs::path conf = write_config(dir.path(), "dataset.path = hundred.tsv\n");
  const std::string out_a = (dir.path() / "a").string(), out_b = (dir.path() / "b").string();
  ASSERT_EQ(run({"featurize", "--config", conf.string(), "--out-dir", out_a}).code, cli::kExitOk);
  ASSERT_EQ(run({"featurize", "--config", conf.string(), "--out-dir", out_b}).code, cli::kExitOk);
  const std::string a = slurp(fs::path(out_a) / "features.tsv");
  EXPECT_EQ(a, slurp(fs::path(out_b) / "features.tsv"));
  EXPECT_EQ(count_lines(a), 101u);
  const auto header = split(a.substr(0, a.find('\n')), '\t');
  EXPECT_EQ(header.size(), 17u);  // id + 16 features
}

TEST(Cli, MissingLexiconIsNamed) {
  TempDir dir("cli");
  const fs::path conf = write_config(dir.path(), "resources.slang = /nowhere/slang.txt\n");
  const CliResult r = run({"featurize", "--config", conf.string(), "--out-dir", dir.path().string()});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("/nowhere/slang.txt"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(dir.path() / "features.tsv"));
}

TEST(Cli, HybridWithoutSentenceVectorsIsConfigError) {
  TempDir dir("cli");
  const fs::path conf = write_config(dir.path(),
                                     "features.set = handcrafted+sentence-vectors\nmodel.kind = hybrid\n");
  const CliResult r = run({"cross-validate", "--config", conf.string(), "--out-dir", dir.path().string()});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("sentence"), std::string::npos) << r.err;
}

TEST(Cli, SetOverridesAndBuildVocab) {
  TempDir dir("cli");
  const fs::path conf = write_config(dir.path(), "features.set = bow\n");
  const CliResult r = run({"build-vocab", "--config", conf.string(), "--out-dir",
                           dir.path().string(), "--set", "bow.min_count=3"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const std::string three = slurp(dir.path() / "vocab.tsv");
  EXPECT_EQ(three.rfind("#docs=200", 0), 0u);
  run({"build-vocab", "--config", conf.string(), "--out-dir", dir.path().string()});
  const std::string five = slurp(dir.path() / "vocab.tsv");
  EXPECT_GT(count_lines(three), count_lines(five));
}

TEST(Cli, EmbedWritesInterchangeFile) {
  TempDir dir("cli");
  const fs::path conf = write_config(
      dir.path(), "resources.word_vectors = " + (mini_dir() / "word_vectors.txt").string() + "\n");
  const CliResult r = run({"embed", "--config", conf.string(), "--out-dir", dir.path().string()});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const SentenceVectorTable t = load_sentence_vectors(dir.path() / "embeddings.tsv");
  EXPECT_EQ(t.size(), 200u);
  EXPECT_EQ(t.dimension(), 8u);
}

TEST(Cli, TrainWritesLoadableModel) {
  TempDir dir("cli");
  const fs::path conf = write_config(dir.path(), "features.set = handcrafted+bow\nmodel.kind = nb\n");
  const CliResult r = run({"train", "--config", conf.string(), "--out-dir", dir.path().string()});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  std::istringstream in(slurp(dir.path() / "model.txt"));
  EXPECT_EQ(load_model(in)->kind(), ModelKind::kGaussianNB);
  EXPECT_TRUE(fs::exists(dir.path() / "vocab.tsv"));
}

TEST(Cli, CrossValidateIsByteIdenticalAcrossRuns) {
  TempDir a("cli"), b("cli");
  const std::string extra = "features.set = handcrafted\ncv.k = 5\npipeline.name = HC\n";
  const fs::path ca = write_config(a.path(), extra), cb = write_config(b.path(), extra);
  const CliResult ra = run({"cross-validate", "--config", ca.string(), "--out-dir", a.path().string()});
  const CliResult rb = run({"cross-validate", "--config", cb.string(), "--out-dir", b.path().string(),
                            "--threads", "3"});
  ASSERT_EQ(ra.code, cli::kExitOk) << ra.err;
  ASSERT_EQ(rb.code, cli::kExitOk) << rb.err;
  EXPECT_EQ(slurp(a.path() / "report.tsv"), slurp(b.path() / "report.tsv"));
  EXPECT_EQ(slurp(a.path() / "report.txt"), slurp(b.path() / "report.txt"));
  EXPECT_TRUE(std::regex_search(ra.out, std::regex(R"(HC\tmini\t\d{1,3}\.\d{2}\(\+/- \d+\.\d{2}\))")))
      << ra.out;
}

TEST(Cli, ReportCombinesFilesAndRejectsConflicts) {
  TempDir dir("cli");
  for (const std::string name : {"A", "B"}) {
    const fs::path sub = dir.path() / name;
    fs::create_directories(sub);
    const fs::path conf =
        write_config(sub, "cv.k = 3\npipeline.name = " + name + "\nmodel.kind = " +
                              (name == "A" ? "lr" : "nb") + "\n");
    ASSERT_EQ(run({"cross-validate", "--config", conf.string(), "--out-dir", sub.string()}).code, 0);
  }
  const std::string ra = (dir.path() / "A" / "report.tsv").string();
  const std::string rb = (dir.path() / "B" / "report.tsv").string();
  const CliResult one = run({"report", ra});
  ASSERT_EQ(one.code, 0) << one.err;
  EXPECT_NE(one.out.find("mini"), std::string::npos);
  const CliResult two = run({"report", ra, rb, "--out", (dir.path() / "t.txt").string()});
  ASSERT_EQ(two.code, 0) << two.err;
  const std::string table = slurp(dir.path() / "t.txt");
  EXPECT_NE(table.find("A "), std::string::npos) << table;
  EXPECT_NE(table.find("B "), std::string::npos) << table;

  // Same pipeline name and dataset with different numbers.
  std::string altered = slurp(rb);
  for (std::size_t pos = 0; (pos = altered.find("\nB\t", pos)) != std::string::npos;) {
    altered.replace(pos, 3, "\nA\t");
  }
  spit(dir.path() / "conflict.tsv", altered);
  const CliResult bad = run({"report", ra, (dir.path() / "conflict.tsv").string()});
  EXPECT_NE(bad.code, 0);
  EXPECT_FALSE(bad.err.empty());
}
