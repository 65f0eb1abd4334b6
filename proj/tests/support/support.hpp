#pragma once

// Shared helpers for the unit and acceptance tests: fixture locations,
// seeded synthetic data, and independent reference implementations used as
// oracles (brute-force recounts, long-double objectives for finite
// differences, exhaustive split search).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "infotweet/corpus.hpp"
#include "infotweet/feature_matrix.hpp"
#include "infotweet/hybrid.hpp"
#include "infotweet/models.hpp"
#include "infotweet/random.hpp"

namespace infotweet::testing {

inline std::filesystem::path source_dir() { return INFOTWEET_SOURCE_DIR; }
inline std::filesystem::path test_data_dir() { return source_dir() / "tests" / "data"; }
inline std::filesystem::path bundled_data_dir() { return source_dir() / "data"; }

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("infotweet-" + tag + "-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline LabelMap binary_label_map() {
  LabelMap map;
  map.set("Informative", LabelTarget::kInformative);
  map.set("NotInformative", LabelTarget::kNotInformative);
  return map;
}

// ---------------------------------------------------------------------------
// Synthetic data

struct DenseData {
  FeatureMatrix x;
  std::vector<Label> y;
};

// Labels from the sign of a random hyperplane; points closer than `margin`
// to it are resampled, so the classes are linearly separable.
inline DenseData separable_data(std::size_t n, std::size_t d, std::uint64_t seed,
                                double margin = 0.3) {
  Rng rng(seed);
  std::vector<double> w(d);
  for (double& v : w) v = rng.normal();
  double norm = 0.0;
  for (const double v : w) norm += v * v;
  norm = std::sqrt(norm);
  for (double& v : w) v /= norm;
  DenseData out{FeatureMatrix(d, 0), {}};
  std::vector<double> row(d);
  while (out.y.size() < n) {
    double z = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      row[j] = 2.0 * rng.normal() + 1.0;
      z += w[j] * (row[j] - 1.0);
    }
    if (std::abs(z) < margin) continue;
    out.x.add_row(row);
    out.y.push_back(z > 0.0 ? Label::kInformative : Label::kNotInformative);
  }
  return out;
}

// Hybrid examples whose class shifts a planted direction in both h and e.
inline HybridData hybrid_synthetic(std::size_t n, std::size_t dh, std::size_t de,
                                   std::uint64_t seed, double strength = 1.5) {
  Rng rng(seed);
  std::vector<double> uh(dh), ue(de);
  for (double& v : uh) v = rng.normal();
  for (double& v : ue) v = rng.normal();
  auto unit = [](std::vector<double>& v) {
    double s = 0.0;
    for (const double x : v) s += x * x;
    s = std::sqrt(s);
    for (double& x : v) x /= s;
  };
  unit(uh);
  unit(ue);
  HybridData data(dh, de);
  std::vector<double> h(dh), e(de);
  for (std::size_t i = 0; i < n; ++i) {
    const Label y = i % 2 == 0 ? Label::kInformative : Label::kNotInformative;
    const double sign = y == Label::kInformative ? 1.0 : -1.0;
    for (std::size_t j = 0; j < dh; ++j) h[j] = sign * strength * uh[j] + 0.5 * rng.normal();
    for (std::size_t j = 0; j < de; ++j) e[j] = sign * strength * ue[j] + 0.5 * rng.normal();
    data.add(h, e, y);
  }
  return data;
}

inline std::vector<Label> random_labels(std::size_t n, Rng& rng) {
  std::vector<Label> out(n);
  for (Label& l : out) l = rng.uniform_index(2) == 0 ? Label::kInformative : Label::kNotInformative;
  return out;
}

// ---------------------------------------------------------------------------
// Metric oracles

inline std::array<std::array<std::size_t, 2>, 2> brute_confusion(std::span<const Label> truth,
                                                                  std::span<const Label> pred) {
  std::array<std::array<std::size_t, 2>, 2> counts{};
  const Label classes[2] = {Label::kInformative, Label::kNotInformative};
  for (std::size_t t = 0; t < 2; ++t) {
    for (std::size_t p = 0; p < 2; ++p) {
      std::size_t c = 0;
      for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] == classes[t] && pred[i] == classes[p]) ++c;
      }
      counts[t][p] = c;
    }
  }
  return counts;
}

struct BruteMetrics {
  double precision[2];
  double recall[2];
  double f1[2];
  double macro_p, macro_r, macro_f1;
};

// Recomputes per-class metrics straight from the label lists.
inline BruteMetrics brute_metrics(std::span<const Label> truth, std::span<const Label> pred) {
  BruteMetrics m{};
  const Label classes[2] = {Label::kInformative, Label::kNotInformative};
  for (std::size_t c = 0; c < 2; ++c) {
    double tp = 0, predicted = 0, actual = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      const bool is_pred = pred[i] == classes[c];
      const bool is_true = truth[i] == classes[c];
      tp += (is_pred && is_true) ? 1 : 0;
      predicted += is_pred ? 1 : 0;
      actual += is_true ? 1 : 0;
    }
    m.precision[c] = predicted > 0 ? tp / predicted : 0.0;
    m.recall[c] = actual > 0 ? tp / actual : 0.0;
    m.f1[c] = (m.precision[c] + m.recall[c]) > 0
                  ? 2 * m.precision[c] * m.recall[c] / (m.precision[c] + m.recall[c])
                  : 0.0;
  }
  m.macro_p = (m.precision[0] + m.precision[1]) / 2;
  m.macro_r = (m.recall[0] + m.recall[1]) / 2;
  m.macro_f1 = (m.f1[0] + m.f1[1]) / 2;
  return m;
}

// ---------------------------------------------------------------------------
// Decision-tree split oracle: every midpoint tried, Gini computed directly.

struct BruteSplit {
  bool valid = false;
  double threshold = 0.0;
  double gain = 0.0;
};

inline double gini_of(std::size_t pos, std::size_t total) {
  if (total == 0) return 0.0;
  const double p = static_cast<double>(pos) / static_cast<double>(total);
  return 1.0 - p * p - (1.0 - p) * (1.0 - p);
}

inline BruteSplit brute_best_split(std::span<const double> column, std::span<const Label> labels) {
  std::vector<double> values(column.begin(), column.end());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  BruteSplit best;
  std::size_t pos_all = 0;
  for (const Label l : labels) pos_all += l == Label::kInformative ? 1 : 0;
  const double parent = gini_of(pos_all, labels.size());
  const double n = static_cast<double>(labels.size());
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    const double t = (values[i] + values[i + 1]) / 2.0;
    std::size_t nl = 0, pl = 0, nr = 0, pr = 0;
    for (std::size_t k = 0; k < column.size(); ++k) {
      const bool pos = labels[k] == Label::kInformative;
      if (column[k] <= t) {
        ++nl;
        pl += pos ? 1 : 0;
      } else {
        ++nr;
        pr += pos ? 1 : 0;
      }
    }
    const double gain = parent - (static_cast<double>(nl) / n) * gini_of(pl, nl) -
                        (static_cast<double>(nr) / n) * gini_of(pr, nr);
    if (!best.valid || gain > best.gain + 1e-12) {
      best = {true, t, gain};
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Long-double reference objectives for central finite differences.

using ld = long double;

inline ld ld_softplus(ld z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

// Logistic objective over a dense matrix, evaluated independently.
inline ld ref_logistic_objective(std::span<const ld> w, ld b, const FeatureMatrix& x,
                                 std::span<const Label> y, ld c) {
  ld total = 0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const FeatureRow row = x.row(i);
    ld z = b;
    for (std::size_t j = 0; j < x.cols(); ++j) z += w[j] * static_cast<ld>(row.at(j));
    const ld t = y[i] == Label::kInformative ? 1 : 0;
    total += ld_softplus(z) - t * z;
  }
  ld reg = 0;
  for (const ld v : w) reg += v * v;
  return total + reg / (2 * c);
}

// Flattened parameter vector [w1, b1, w2, b2] for the MLP reference.
inline ld ref_mlp_objective(std::span<const ld> theta, std::size_t inputs, std::size_t hidden,
                            const FeatureMatrix& x, std::span<const Label> y, ld alpha) {
  const ld* w1 = theta.data();
  const ld* b1 = w1 + hidden * inputs;
  const ld* w2 = b1 + hidden;
  const ld* b2 = w2 + 2 * hidden;
  ld loss = 0;
  std::vector<ld> h(hidden);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const FeatureRow row = x.row(i);
    for (std::size_t k = 0; k < hidden; ++k) {
      ld a = b1[k];
      for (std::size_t j = 0; j < inputs; ++j) a += w1[k * inputs + j] * static_cast<ld>(row.at(j));
      h[k] = a > 0 ? a : 0;
    }
    ld z[2];
    for (std::size_t c = 0; c < 2; ++c) {
      z[c] = b2[c];
      for (std::size_t k = 0; k < hidden; ++k) z[c] += w2[c * hidden + k] * h[k];
    }
    const ld top = std::max(z[0], z[1]);
    const ld lse = top + std::log(std::exp(z[0] - top) + std::exp(z[1] - top));
    loss += lse - z[class_index(y[i])];
  }
  ld reg = 0;
  for (std::size_t i = 0; i < hidden * inputs; ++i) reg += w1[i] * w1[i];
  for (std::size_t i = 0; i < 2 * hidden; ++i) reg += w2[i] * w2[i];
  const ld m = static_cast<ld>(x.rows());
  return loss / m + alpha * reg / (2 * m);
}

// Hybrid head reference over flattened blocks in W1, b1, W2, b2, W3, b3 order.
struct HybridShape {
  std::size_t dh, de, p, q;
  bool relu = true;
  std::array<std::size_t, 6> sizes() const {
    return {p * dh, p, q * de, q, 2 * (p + q), 2};
  }
};

inline std::array<ld, 2> ref_hybrid_probs(std::span<const ld> theta, const HybridShape& s,
                                          std::span<const double> h, std::span<const double> e) {
  const auto sz = s.sizes();
  const ld* w1 = theta.data();
  const ld* b1 = w1 + sz[0];
  const ld* w2 = b1 + sz[1];
  const ld* b2 = w2 + sz[2];
  const ld* w3 = b2 + sz[3];
  const ld* b3 = w3 + sz[4];
  std::vector<ld> joint(s.p + s.q);
  auto act = [&](ld v) { return s.relu ? (v > 0 ? v : 0) : v; };
  for (std::size_t k = 0; k < s.p; ++k) {
    ld a = b1[k];
    for (std::size_t j = 0; j < s.dh; ++j) a += w1[k * s.dh + j] * static_cast<ld>(h[j]);
    joint[k] = act(a);
  }
  for (std::size_t k = 0; k < s.q; ++k) {
    ld a = b2[k];
    for (std::size_t j = 0; j < s.de; ++j) a += w2[k * s.de + j] * static_cast<ld>(e[j]);
    joint[s.p + k] = act(a);
  }
  ld z[2];
  for (std::size_t c = 0; c < 2; ++c) {
    z[c] = b3[c];
    for (std::size_t k = 0; k < s.p + s.q; ++k) z[c] += w3[c * (s.p + s.q) + k] * joint[k];
  }
  const ld top = std::max(z[0], z[1]);
  const ld e0 = std::exp(z[0] - top);
  const ld e1 = std::exp(z[1] - top);
  return {e0 / (e0 + e1), e1 / (e0 + e1)};
}

inline ld ref_hybrid_loss(std::span<const ld> theta, const HybridShape& s, const HybridData& data,
                          std::span<const std::size_t> batch) {
  ld total = 0;
  for (const std::size_t i : batch) {
    const auto p = ref_hybrid_probs(theta, s, data.h(i), data.e(i));
    total += -std::log(std::max<ld>(p[class_index(data.label(i))], 1e-12L));
  }
  return total / static_cast<ld>(batch.size());
}

inline std::vector<ld> flatten(const HybridParams& params) {
  std::vector<ld> out;
  for (const std::vector<double>* b : params.blocks()) out.insert(out.end(), b->begin(), b->end());
  return out;
}

inline std::vector<ld> flatten(const MlpParams& params) {
  std::vector<ld> out;
  for (const std::vector<double>* b : {&params.w1, &params.b1, &params.w2, &params.b2}) {
    out.insert(out.end(), b->begin(), b->end());
  }
  return out;
}

// Central difference of f at theta along coordinate i.
template <typename F>
ld central_difference(F&& f, std::vector<ld>& theta, std::size_t i, ld eps = 1e-5L) {
  const ld saved = theta[i];
  theta[i] = saved + eps;
  const ld up = f(theta);
  theta[i] = saved - eps;
  const ld down = f(theta);
  theta[i] = saved;
  return (up - down) / (2 * eps);
}

// |a - b| / max(|a|, |b|, floor): relative error with an absolute floor for
// entries whose true gradient is near zero.
inline double relative_error(ld analytic, ld numeric, ld floor = 1e-6L) {
  const ld scale = std::max({std::abs(analytic), std::abs(numeric), floor});
  return static_cast<double>(std::abs(analytic - numeric) / scale);
}

}  // namespace infotweet::testing
