#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "infotweet/corpus.hpp"

namespace infotweet {

// counts[true class][predicted class], class index 0 = Informative.
struct ConfusionMatrix {
  std::array<std::array<std::size_t, 2>, 2> counts{};

  std::size_t at(Label truth, Label predicted) const {
    return counts[class_index(truth)][class_index(predicted)];
  }
  std::size_t total() const {
    return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1];
  }
  bool operator==(const ConfusionMatrix&) const = default;
};

// Throws DataError on empty input or a length mismatch.
ConfusionMatrix confusion(std::span<const Label> y_true, std::span<const Label> y_pred);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct MacroMetrics {
  std::array<ClassMetrics, 2> per_class{};
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
};

// Per-class precision, recall and F1 (0/0 taken as 0), averaged without
// weights. Throws DataError on an empty matrix.
MacroMetrics macro_metrics(const ConfusionMatrix& cm);

enum class Metric { kMacroPrecision, kMacroRecall, kMacroF1 };
inline constexpr std::array<Metric, 3> kAllMetrics = {Metric::kMacroPrecision, Metric::kMacroRecall,
                                                      Metric::kMacroF1};
std::string_view metric_name(Metric metric);  // macro_precision, macro_recall, macro_f1
Metric parse_metric(std::string_view name);   // throws ConfigError
double metric_value(const MacroMetrics& metrics, Metric metric);

struct RunMetadata {
  std::string pipeline;
  std::string dataset;
  std::string feature_set;
  std::string model;
  std::uint64_t seed = 0;
};

struct FoldOutcome {
  bool ok = false;
  std::string error;  // set when the fold failed
  ConfusionMatrix confusion;
  MacroMetrics metrics;
};

struct MetricSummary {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation; 0 for a single fold
  std::size_t folds = 0;  // successful folds the summary covers
};

struct CVReport {
  RunMetadata metadata;
  std::vector<FoldOutcome> folds;  // one entry per fold, failures included
  std::array<MetricSummary, 3> summary{};  // indexed like kAllMetrics

  const MetricSummary& of(Metric metric) const { return summary[static_cast<std::size_t>(metric)]; }
  std::size_t failed_folds() const;
  // Recomputes the summaries from the fold outcomes.
  void aggregate();
};

// Mean and sample standard deviation.
MetricSummary summarize(std::span<const double> values);

// Trains on `train` and returns one predicted label per `test` index, in order.
using FoldRunner = std::function<std::vector<Label>(
    std::size_t fold, std::span<const std::size_t> train, std::span<const std::size_t> test)>;

// Runs every fold of the plan. A runner that throws a library Error marks
// that fold as failed; the report aggregates the remaining folds. Folds may
// run on up to `threads` threads; the result does not depend on the count.
CVReport cross_validate(const Dataset& dataset, const FoldPlan& plan, const FoldRunner& runner,
                        RunMetadata metadata, std::size_t threads = 1);

// "mean(+/- std)" on the percent scale with two decimals; inputs are
// fractions. NaN renders as "NA".
std::string render_cell(double mean, double std);

struct ResultTable {
  Metric metric = Metric::kMacroF1;
  std::vector<std::string> pipelines;  // rows, first-seen order
  std::vector<std::string> datasets;   // columns, first-seen order
  std::vector<std::vector<std::string>> cells;  // [row][col]; empty when absent

  std::string to_text() const;  // aligned plain-text table
};

// Throws DataError on an empty list or when two reports for the same
// (pipeline, dataset) disagree. Identical duplicates are merged.
ResultTable render_report(std::span<const CVReport> reports, Metric metric = Metric::kMacroF1);

// Machine-readable form: '#' metadata lines, then the header
// pipeline\tdataset\tmetric\tmean\tstd\tfolds with comma-separated per-fold
// values ("NA" for failed folds).
void write_report_tsv(const CVReport& report, std::ostream& out);
CVReport read_report_tsv(std::istream& in, const std::string& source = "<stream>");
CVReport load_report(const std::string& path);

// Human-readable companion: the one-cell table plus per-fold details.
void write_report_text(const CVReport& report, std::ostream& out);

}  // namespace infotweet
