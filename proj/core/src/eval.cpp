#include "infotweet/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "infotweet/error.hpp"
#include "infotweet/strings.hpp"

namespace infotweet {

ConfusionMatrix confusion(std::span<const Label> y_true, std::span<const Label> y_pred) {
  if (y_true.size() != y_pred.size()) {
    throw DataError("confusion: " + std::to_string(y_true.size()) + " true labels but " +
                    std::to_string(y_pred.size()) + " predictions");
  }
  if (y_true.empty()) throw DataError("confusion: no labels");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    ++cm.counts[class_index(y_true[i])][class_index(y_pred[i])];
  }
  return cm;
}

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

MacroMetrics macro_metrics(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw DataError("macro metrics of an empty confusion matrix");
  MacroMetrics m;
  for (std::size_t c = 0; c < 2; ++c) {
    const std::size_t other = 1 - c;
    const std::size_t tp = cm.counts[c][c];
    const std::size_t fp = cm.counts[other][c];
    const std::size_t fn = cm.counts[c][other];
    ClassMetrics& k = m.per_class[c];
    k.precision = ratio(tp, tp + fp);
    k.recall = ratio(tp, tp + fn);
    const double sum = k.precision + k.recall;
    k.f1 = sum == 0.0 ? 0.0 : 2.0 * k.precision * k.recall / sum;
  }
  m.macro_precision = (m.per_class[0].precision + m.per_class[1].precision) / 2.0;
  m.macro_recall = (m.per_class[0].recall + m.per_class[1].recall) / 2.0;
  m.macro_f1 = (m.per_class[0].f1 + m.per_class[1].f1) / 2.0;
  return m;
}

std::string_view metric_name(Metric metric) {
  switch (metric) {
    case Metric::kMacroPrecision:
      return "macro_precision";
    case Metric::kMacroRecall:
      return "macro_recall";
    case Metric::kMacroF1:
      return "macro_f1";
  }
  return "unknown";
}

Metric parse_metric(std::string_view name) {
  for (const Metric m : kAllMetrics) {
    if (metric_name(m) == name) return m;
  }
  throw ConfigError("unknown metric '" + std::string(name) + "'");
}

double metric_value(const MacroMetrics& metrics, Metric metric) {
  switch (metric) {
    case Metric::kMacroPrecision:
      return metrics.macro_precision;
    case Metric::kMacroRecall:
      return metrics.macro_recall;
    case Metric::kMacroF1:
      return metrics.macro_f1;
  }
  return 0.0;
}

MetricSummary summarize(std::span<const double> values) {
  MetricSummary s;
  s.folds = values.size();
  if (values.empty()) {
    s.mean = s.std = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  double sum = 0.0;
  for (const double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) {
    s.std = 0.0;
    return s;
  }
  double sq = 0.0;
  for (const double v : values) sq += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(sq / static_cast<double>(values.size() - 1));
  return s;
}

std::size_t CVReport::failed_folds() const {
  return static_cast<std::size_t>(
      std::count_if(folds.begin(), folds.end(), [](const FoldOutcome& f) { return !f.ok; }));
}

void CVReport::aggregate() {
  for (std::size_t m = 0; m < kAllMetrics.size(); ++m) {
    std::vector<double> values;
    for (const FoldOutcome& f : folds) {
      if (f.ok) values.push_back(metric_value(f.metrics, kAllMetrics[m]));
    }
    summary[m] = summarize(values);
  }
}

CVReport cross_validate(const Dataset& dataset, const FoldPlan& plan, const FoldRunner& runner,
                        RunMetadata metadata, std::size_t threads) {
  if (plan.size() != dataset.size()) {
    throw DataError("fold plan covers " + std::to_string(plan.size()) + " records but dataset '" +
                    dataset.name() + "' has " + std::to_string(dataset.size()));
  }
  const std::vector<Label> labels = dataset.labels();
  CVReport report;
  report.metadata = std::move(metadata);
  report.folds.resize(plan.k());

  auto run_fold = [&](std::size_t fold) {
    FoldOutcome& out = report.folds[fold];
    const std::vector<std::size_t> train = plan.train_indices(fold);
    const std::vector<std::size_t> test = plan.test_indices(fold);
    try {
      const std::vector<Label> predicted = runner(fold, train, test);
      std::vector<Label> truth;
      truth.reserve(test.size());
      for (const std::size_t i : test) truth.push_back(labels[i]);
      out.confusion = confusion(truth, predicted);
      out.metrics = macro_metrics(out.confusion);
      out.ok = true;
    } catch (const Error& e) {
      out.ok = false;
      out.error = e.what();
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(threads, 1, plan.k());
  if (workers == 1) {
    for (std::size_t fold = 0; fold < plan.k(); ++fold) run_fold(fold);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t fold = next++; fold < plan.k(); fold = next++) {
          try {
            run_fold(fold);
          } catch (...) {
            const std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (std::thread& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }
  report.aggregate();
  return report;
}

std::string render_cell(double mean, double std) {
  if (std::isnan(mean) || std::isnan(std)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f(+/- %.2f)", mean * 100.0, std * 100.0);
  return buf;
}

ResultTable render_report(std::span<const CVReport> reports, Metric metric) {
  if (reports.empty()) throw DataError("render_report needs at least one report");
  ResultTable table;
  table.metric = metric;
  std::map<std::pair<std::string, std::string>, const CVReport*> seen;
  auto index_of = [](std::vector<std::string>& names, const std::string& name) {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it != names.end()) return static_cast<std::size_t>(it - names.begin());
    names.push_back(name);
    return names.size() - 1;
  };
  struct Cell {
    std::size_t row, col;
    std::string text;
  };
  std::vector<Cell> cells;
  for (const CVReport& r : reports) {
    const auto key = std::make_pair(r.metadata.pipeline, r.metadata.dataset);
    const auto it = seen.find(key);
    if (it != seen.end()) {
      const CVReport& prev = *it->second;
      bool same = prev.folds.size() == r.folds.size();
      for (std::size_t m = 0; same && m < kAllMetrics.size(); ++m) {
        const MetricSummary& a = prev.summary[m];
        const MetricSummary& b = r.summary[m];
        same = a.folds == b.folds && ((std::isnan(a.mean) && std::isnan(b.mean)) ||
                                      (a.mean == b.mean && a.std == b.std));
      }
      if (!same) {
        throw DataError("conflicting reports for pipeline '" + key.first + "' on dataset '" +
                        key.second + "'");
      }
      continue;
    }
    seen.emplace(key, &r);
    const std::size_t row = index_of(table.pipelines, key.first);
    const std::size_t col = index_of(table.datasets, key.second);
    const MetricSummary& s = r.of(metric);
    cells.push_back({row, col, render_cell(s.mean, s.std)});
  }
  table.cells.assign(table.pipelines.size(), std::vector<std::string>(table.datasets.size()));
  for (const Cell& c : cells) table.cells[c.row][c.col] = c.text;
  return table;
}

std::string ResultTable::to_text() const {
  const std::string corner = "pipeline \\ " + std::string(metric_name(metric));
  std::vector<std::size_t> widths(datasets.size() + 1, 0);
  widths[0] = corner.size();
  for (const std::string& p : pipelines) widths[0] = std::max(widths[0], p.size());
  for (std::size_t c = 0; c < datasets.size(); ++c) {
    widths[c + 1] = datasets[c].size();
    for (const auto& row : cells) widths[c + 1] = std::max(widths[c + 1], row[c].size());
  }
  std::ostringstream out;
  auto emit = [&](const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i > 0) line += "  ";
      line += fields[i];
      if (i + 1 < fields.size()) line.append(widths[i] - fields[i].size(), ' ');
    }
    out << line << '\n';
  };
  std::vector<std::string> header{corner};
  header.insert(header.end(), datasets.begin(), datasets.end());
  emit(header);
  for (std::size_t r = 0; r < pipelines.size(); ++r) {
    std::vector<std::string> fields{pipelines[r]};
    for (const std::string& cell : cells[r]) fields.push_back(cell.empty() ? "-" : cell);
    emit(fields);
  }
  return out.str();
}

namespace {

constexpr std::string_view kReportMagic = "# infotweet-report 1";
constexpr std::string_view kReportHeader = "pipeline\tdataset\tmetric\tmean\tstd\tfolds";

std::string format_value(double v) { return std::isnan(v) ? "NA" : format_shortest(v); }

void check_field(std::string_view value, std::string_view what) {
  if (value.find_first_of("\t\n\r") != std::string_view::npos) {
    throw DataError(std::string(what) + " must not contain tabs or line breaks");
  }
}

}  // namespace

void write_report_tsv(const CVReport& report, std::ostream& out) {
  const RunMetadata& m = report.metadata;
  check_field(m.pipeline, "pipeline name");
  check_field(m.dataset, "dataset name");
  out << kReportMagic << '\n';
  out << "# feature_set=" << m.feature_set << '\n';
  out << "# model=" << m.model << '\n';
  out << "# seed=" << m.seed << '\n';
  out << "# k=" << report.folds.size() << '\n';
  for (std::size_t f = 0; f < report.folds.size(); ++f) {
    if (!report.folds[f].ok) {
      std::string reason = report.folds[f].error;
      std::replace_if(reason.begin(), reason.end(), [](char c) { return c == '\n' || c == '\r'; }, ' ');
      out << "# fold " << (f + 1) << " failed: " << reason << '\n';
    }
  }
  out << kReportHeader << '\n';
  for (std::size_t i = 0; i < kAllMetrics.size(); ++i) {
    const Metric metric = kAllMetrics[i];
    const MetricSummary& s = report.summary[i];
    out << m.pipeline << '\t' << m.dataset << '\t' << metric_name(metric) << '\t'
        << format_value(s.mean) << '\t' << format_value(s.std) << '\t';
    for (std::size_t f = 0; f < report.folds.size(); ++f) {
      if (f > 0) out << ',';
      const FoldOutcome& fold = report.folds[f];
      out << (fold.ok ? format_shortest(metric_value(fold.metrics, metric)) : std::string("NA"));
    }
    out << '\n';
  }
}

CVReport read_report_tsv(std::istream& in, const std::string& source) {
  auto fail = [&source](std::size_t line, const std::string& message) -> ParseError {
    return ParseError(source + ":" + std::to_string(line) + ": " + message);
  };
  auto parse_number = [&](std::string_view text, std::size_t line) {
    if (text == "NA") return std::numeric_limits<double>::quiet_NaN();
    double v = 0.0;
    if (!parse_double(text, v)) throw fail(line, "invalid number '" + std::string(text) + "'");
    return v;
  };

  CVReport report;
  std::map<std::size_t, std::string> failures;
  std::string line;
  std::size_t line_no = 0;
  std::size_t declared_k = 0;
  bool have_k = false;
  bool header_seen = false;
  std::array<bool, 3> metric_seen{};

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != kReportMagic) throw fail(line_no, "not a report file");
      continue;
    }
    if (!header_seen) {
      if (line == kReportHeader) {
        header_seen = true;
        continue;
      }
      if (line.rfind("# ", 0) != 0) throw fail(line_no, "expected a comment or the column header");
      const std::string body = line.substr(2);
      if (body.rfind("fold ", 0) == 0) {
        const auto colon = body.find(" failed: ");
        std::uint64_t fold = 0;
        if (colon == std::string::npos || !parse_uint64(body.substr(5, colon - 5), fold) || fold == 0) {
          throw fail(line_no, "malformed fold failure line");
        }
        failures[static_cast<std::size_t>(fold - 1)] = body.substr(colon + 9);
        continue;
      }
      const auto eq = body.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = body.substr(0, eq);
      const std::string value = body.substr(eq + 1);
      if (key == "feature_set") {
        report.metadata.feature_set = value;
      } else if (key == "model") {
        report.metadata.model = value;
      } else if (key == "seed") {
        if (!parse_uint64(value, report.metadata.seed)) throw fail(line_no, "invalid seed");
      } else if (key == "k") {
        std::uint64_t k = 0;
        if (!parse_uint64(value, k) || k == 0) throw fail(line_no, "invalid fold count");
        declared_k = static_cast<std::size_t>(k);
        have_k = true;
      }
      continue;
    }
    if (line.empty()) continue;
    const std::vector<std::string_view> fields = split(line, '\t');
    if (fields.size() != 6) throw fail(line_no, "expected 6 tab-separated fields");
    Metric metric;
    try {
      metric = parse_metric(fields[2]);
    } catch (const ConfigError&) {
      throw fail(line_no, "unknown metric '" + std::string(fields[2]) + "'");
    }
    const std::size_t mi = static_cast<std::size_t>(metric);
    if (metric_seen[mi]) throw fail(line_no, "duplicate metric row");
    if (std::any_of(metric_seen.begin(), metric_seen.end(), [](bool b) { return b; })) {
      if (fields[0] != report.metadata.pipeline || fields[1] != report.metadata.dataset) {
        throw fail(line_no, "rows name different pipelines or datasets");
      }
    } else {
      report.metadata.pipeline = fields[0];
      report.metadata.dataset = fields[1];
    }
    metric_seen[mi] = true;
    const std::vector<std::string_view> values = split(fields[5], ',');
    if (report.folds.empty()) {
      report.folds.resize(values.size());
      for (std::size_t f = 0; f < values.size(); ++f) report.folds[f].ok = values[f] != "NA";
    }
    if (values.size() != report.folds.size()) throw fail(line_no, "inconsistent fold count");
    std::size_t ok_folds = 0;
    for (std::size_t f = 0; f < values.size(); ++f) {
      const double v = parse_number(values[f], line_no);
      if (std::isnan(v) == report.folds[f].ok) throw fail(line_no, "inconsistent fold failures");
      if (report.folds[f].ok) {
        ++ok_folds;
        switch (metric) {
          case Metric::kMacroPrecision:
            report.folds[f].metrics.macro_precision = v;
            break;
          case Metric::kMacroRecall:
            report.folds[f].metrics.macro_recall = v;
            break;
          case Metric::kMacroF1:
            report.folds[f].metrics.macro_f1 = v;
            break;
        }
      }
    }
    report.summary[mi].mean = parse_number(fields[3], line_no);
    report.summary[mi].std = parse_number(fields[4], line_no);
    report.summary[mi].folds = ok_folds;
  }
  if (line_no == 0) throw ParseError(source + ": empty report file");
  if (!header_seen) throw ParseError(source + ": missing column header");
  if (!std::all_of(metric_seen.begin(), metric_seen.end(), [](bool b) { return b; })) {
    throw ParseError(source + ": report is missing metric rows");
  }
  if (have_k && declared_k != report.folds.size()) {
    throw ParseError(source + ": fold count does not match k=" + std::to_string(declared_k));
  }
  for (std::size_t f = 0; f < report.folds.size(); ++f) {
    if (!report.folds[f].ok) {
      const auto it = failures.find(f);
      report.folds[f].error = it != failures.end() ? it->second : "fold failed";
    }
  }
  return report;
}

CVReport load_report(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open report file '" + path + "'");
  return read_report_tsv(in, path);
}

void write_report_text(const CVReport& report, std::ostream& out) {
  const RunMetadata& m = report.metadata;
  out << "pipeline:    " << m.pipeline << '\n';
  out << "dataset:     " << m.dataset << '\n';
  out << "feature set: " << m.feature_set << '\n';
  out << "model:       " << m.model << '\n';
  out << "seed:        " << m.seed << '\n';
  out << "folds:       " << report.folds.size() << " (" << report.failed_folds() << " failed)\n\n";
  const CVReport* one = &report;
  out << render_report(std::span<const CVReport>(one, 1)).to_text() << '\n';

  out << "metric           mean(+/- std), percent\n";
  for (std::size_t i = 0; i < kAllMetrics.size(); ++i) {
    std::string name(metric_name(kAllMetrics[i]));
    name.resize(17, ' ');
    out << name << render_cell(report.summary[i].mean, report.summary[i].std) << '\n';
  }
  out << "\nfold  macro_precision  macro_recall  macro_f1\n";
  for (std::size_t f = 0; f < report.folds.size(); ++f) {
    const FoldOutcome& fold = report.folds[f];
    char buf[128];
    if (fold.ok) {
      std::snprintf(buf, sizeof buf, "%4zu  %15.4f  %12.4f  %8.4f", f + 1, fold.metrics.macro_precision,
                    fold.metrics.macro_recall, fold.metrics.macro_f1);
      out << buf << '\n';
    } else {
      std::snprintf(buf, sizeof buf, "%4zu  failed: ", f + 1);
      out << buf << fold.error << '\n';
    }
  }
}

}  // namespace infotweet
