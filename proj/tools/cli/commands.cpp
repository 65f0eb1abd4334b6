#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include "config.hpp"
#include "infotweet/bow.hpp"
#include "infotweet/embeddings.hpp"
#include "infotweet/error.hpp"
#include "infotweet/eval.hpp"
#include "infotweet/features.hpp"
#include "infotweet/pipeline.hpp"
#include "infotweet/strings.hpp"

namespace infotweet::cli {
namespace {

struct CommonFlags {
  std::string config;
  std::string out_dir;
  std::string seed;
  std::string threads;
  std::vector<std::string> sets;
};

// Usage or configuration problem; reported with exit code 1.
struct UsageError {
  std::vector<std::string> messages;
};

void add_common_flags(CLI::App& cmd, CommonFlags& flags) {
  cmd.add_option("--config", flags.config, "Run configuration file (key = value)")->required();
  cmd.add_option("--out-dir", flags.out_dir, "Output directory (overrides output.dir)");
  cmd.add_option("--seed", flags.seed, "Top-level seed (overrides seed)");
  cmd.add_option("--threads", flags.threads, "Worker threads (overrides threads)");
  cmd.add_option("--set", flags.sets, "Override a setting: key=value (repeatable)");
}

RunConfig resolve_config(const CommonFlags& flags, Command command) {
  RawConfig raw;
  try {
    raw = RawConfig::load(flags.config);
  } catch (const Error& e) {
    throw UsageError{{e.what()}};
  }
  std::vector<std::string> errors;
  for (const std::string& s : flags.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) {
      errors.push_back("--set " + s + ": expected key=value");
      continue;
    }
    raw.set(std::string(trim(s.substr(0, eq))), std::string(trim(s.substr(eq + 1))), "--set", ".");
  }
  if (!flags.out_dir.empty()) raw.set("output.dir", flags.out_dir, "--out-dir", ".");
  if (!flags.seed.empty()) raw.set("seed", flags.seed, "--seed", ".");
  if (!flags.threads.empty()) raw.set("threads", flags.threads, "--threads", ".");
  ConfigCheck check = interpret(raw, command);
  errors.insert(errors.end(), check.errors.begin(), check.errors.end());
  if (!errors.empty()) throw UsageError{std::move(errors)};
  return std::move(check.config);
}

Dataset load_configured_dataset(const RunConfig& c) {
  return load_dataset(c.dataset_path, c.schema, c.labels, c.dataset_name);
}

Resources load_resources(const RunConfig& c, bool lexicons, bool word_vectors, bool sentence_vectors) {
  Resources r;
  if (lexicons && c.slang_path) r.slang = Lexicon::load(*c.slang_path, LexiconKind::kSlang);
  if (lexicons && c.interjections_path) {
    r.interjections = Lexicon::load(*c.interjections_path, LexiconKind::kInterjection);
  }
  if (word_vectors && c.word_vectors_path) r.word_vectors = load_word_vectors(*c.word_vectors_path);
  if (sentence_vectors && c.sentence_vectors_path) {
    r.sentence_vectors = load_sentence_vectors(*c.sentence_vectors_path);
  }
  return r;
}

std::ofstream open_output(const std::filesystem::path& dir, const std::string& file) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path path = dir / file;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.close();
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

int cmd_featurize(const RunConfig& c, std::ostream& out) {
  const Dataset dataset = load_configured_dataset(c);
  const Resources r = load_resources(c, true, false, false);
  const HandcraftedMatrix m = featurize(dataset, r.slang, r.interjections);
  std::ofstream file = open_output(c.out_dir, "features.tsv");
  m.write_tsv(file);
  finish(file, c.out_dir / "features.tsv");
  out << "wrote " << m.rows() << " rows x " << m.dims() << " features to "
      << (c.out_dir / "features.tsv").string() << '\n';
  return kExitOk;
}

int cmd_build_vocab(const RunConfig& c, std::ostream& out) {
  const Dataset dataset = load_configured_dataset(c);
  std::vector<TokenList> corpus;
  corpus.reserve(dataset.size());
  for (const TweetRecord& r : dataset.records()) corpus.push_back(analyze(r.text));
  const Vocabulary vocab = build_vocab(corpus, c.pipeline.vocab);
  std::ofstream file = open_output(c.out_dir, "vocab.tsv");
  vocab.write(file);
  finish(file, c.out_dir / "vocab.tsv");
  out << "wrote " << vocab.size() << " terms to " << (c.out_dir / "vocab.tsv").string() << '\n';
  return kExitOk;
}

int cmd_embed(const RunConfig& c, std::ostream& out) {
  const Dataset dataset = load_configured_dataset(c);
  const Resources r = load_resources(c, false, true, false);
  SentenceVectorTable table(r.word_vectors->dimension());
  for (const TweetRecord& rec : dataset.records()) {
    table.add(rec.id, average_embed(analyze(rec.text), *r.word_vectors));
  }
  std::ofstream file = open_output(c.out_dir, "embeddings.tsv");
  write_sentence_vectors(table, file);
  finish(file, c.out_dir / "embeddings.tsv");
  out << "wrote " << table.size() << " vectors of dimension " << table.dimension() << " to "
      << (c.out_dir / "embeddings.tsv").string() << '\n';
  return kExitOk;
}

Resources pipeline_resources(const RunConfig& c) {
  const FeatureSet set = c.pipeline.features;
  return load_resources(c, uses_handcrafted(set), uses_word_vectors(set), uses_sentence_vectors(set));
}

int cmd_train(const RunConfig& c, std::ostream& out) {
  const Dataset dataset = load_configured_dataset(c);
  const Resources r = pipeline_resources(c);
  const PreparedPipeline prepared(dataset, c.pipeline, r);
  std::ofstream file = open_output(c.out_dir, "model.txt");
  Vocabulary vocab;
  prepared.train_all(file, &vocab);
  finish(file, c.out_dir / "model.txt");
  out << "wrote " << (c.out_dir / "model.txt").string() << '\n';
  if (uses_bow(c.pipeline.features)) {
    std::ofstream vfile = open_output(c.out_dir, "vocab.tsv");
    vocab.write(vfile);
    finish(vfile, c.out_dir / "vocab.tsv");
    out << "wrote " << (c.out_dir / "vocab.tsv").string() << '\n';
  }
  return kExitOk;
}

int cmd_cross_validate(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const Dataset dataset = load_configured_dataset(c);
  const Resources r = pipeline_resources(c);
  CrossValidationSettings cv;
  cv.k = c.cv_k;
  cv.seed = c.seed;
  cv.stratified = c.cv_stratified;
  cv.threads = c.threads;
  PipelineSpec spec = c.pipeline;
  // Folds already run in parallel; keep each fit single-threaded.
  spec.model_threads = 1;
  const CVReport report = cross_validate_pipeline(dataset, spec, r, cv);

  std::ofstream tsv = open_output(c.out_dir, "report.tsv");
  write_report_tsv(report, tsv);
  finish(tsv, c.out_dir / "report.tsv");
  std::ofstream txt = open_output(c.out_dir, "report.txt");
  write_report_text(report, txt);
  finish(txt, c.out_dir / "report.txt");

  for (std::size_t f = 0; f < report.folds.size(); ++f) {
    if (!report.folds[f].ok) err << "fold " << (f + 1) << " failed: " << report.folds[f].error << '\n';
  }
  const MetricSummary& f1 = report.of(Metric::kMacroF1);
  out << report.metadata.pipeline << '\t' << report.metadata.dataset << '\t'
      << render_cell(f1.mean, f1.std) << '\n';
  return report.failed_folds() == report.folds.size() ? kExitRuntime : kExitOk;
}

int cmd_report(const std::vector<std::string>& files, const std::string& metric_name,
               const std::string& out_file, std::ostream& out) {
  Metric metric = Metric::kMacroF1;
  try {
    metric = parse_metric(metric_name);
  } catch (const Error& e) {
    throw UsageError{{e.what()}};
  }
  std::vector<CVReport> reports;
  for (const std::string& f : files) reports.push_back(load_report(f));
  const std::string text = render_report(reports, metric).to_text();
  out << text;
  if (!out_file.empty()) {
    std::ofstream file(out_file, std::ios::binary | std::ios::trunc);
    if (!file) throw DataError("cannot write '" + out_file + "'");
    file << text;
    finish(file, out_file);
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Informative-tweet classification toolkit", "infotweet"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "infotweet 0.1.0");

  struct Sub {
    Command command;
    CLI::App* app;
    CommonFlags flags;
  };
  std::vector<Sub> subs;
  subs.reserve(5);
  const std::pair<Command, const char*> table[] = {
      {Command::kFeaturize, "featurize"},
      {Command::kBuildVocab, "build-vocab"},
      {Command::kEmbed, "embed"},
      {Command::kTrain, "train"},
      {Command::kCrossValidate, "cross-validate"},
  };
  const char* descriptions[] = {
      "Write the handcrafted feature matrix (features.tsv)",
      "Fit the TF-IDF vocabulary on the dataset (vocab.tsv)",
      "Average word vectors per record into an interchange file (embeddings.tsv)",
      "Train the configured pipeline on every record (model.txt)",
      "Run k-fold cross-validation (report.tsv, report.txt)",
  };
  for (std::size_t i = 0; i < 5; ++i) {
    subs.push_back({table[i].first, app.add_subcommand(table[i].second, descriptions[i]), {}});
  }
  for (Sub& s : subs) add_common_flags(*s.app, s.flags);

  std::vector<std::string> report_files;
  std::string report_metric = "macro_f1";
  std::string report_out;
  CLI::App* report = app.add_subcommand("report", "Render report files as one table");
  report->add_option("files", report_files, "report.tsv files")->required();
  report->add_option("--metric", report_metric, "macro_precision, macro_recall or macro_f1");
  report->add_option("--out", report_out, "Also write the table to this file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (report->parsed()) return cmd_report(report_files, report_metric, report_out, out);
    for (const Sub& s : subs) {
      if (!s.app->parsed()) continue;
      const RunConfig config = resolve_config(s.flags, s.command);
      switch (s.command) {
        case Command::kFeaturize:
          return cmd_featurize(config, out);
        case Command::kBuildVocab:
          return cmd_build_vocab(config, out);
        case Command::kEmbed:
          return cmd_embed(config, out);
        case Command::kTrain:
          return cmd_train(config, out);
        case Command::kCrossValidate:
          return cmd_cross_validate(config, out, err);
      }
    }
  } catch (const UsageError& e) {
    for (const std::string& m : e.messages) err << "error: " << m << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace infotweet::cli
