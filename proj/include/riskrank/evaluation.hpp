#pragma once

// Signal evaluation for early-warning models: contingency matrices, type I
// and II error rates, the policymaker loss L(mu), absolute and relative
// usefulness, ROC AUC and the usual precision / recall / accuracy figures.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "riskrank/error.hpp"

namespace riskrank {

struct ContingencyMatrix {
  std::uint64_t tp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const { return tp + tn + fp + fn; }
  bool operator==(const ContingencyMatrix&) const = default;
};

/// Unconditional class frequencies: P1 of crisis (pre-crisis) observations
/// and P2 of tranquil ones.
struct ClassPriors {
  double p1 = 0.0;
  double p2 = 0.0;
};

inline void check_matrix(const ContingencyMatrix& cm) {
  if (cm.total() == 0) throw Error(ErrorCode::invalid_argument, "contingency matrix is empty");
}

inline ClassPriors priors(const ContingencyMatrix& cm) {
  check_matrix(cm);
  const double n = static_cast<double>(cm.total());
  return {static_cast<double>(cm.tp + cm.fn) / n, static_cast<double>(cm.tn + cm.fp) / n};
}

/// Policymaker preference between missing crises (type I) and false alarms
/// (type II); not to be confused with a fuzzy measure.
class PreferenceMu {
 public:
  explicit PreferenceMu(double value) : value_(value) {
    if (!(value >= 0.0 && value <= 1.0)) {
      throw Error(ErrorCode::invalid_argument, "preference mu must lie in [0, 1]");
    }
  }
  double value() const { return value_; }
  operator double() const { return value_; }

 private:
  double value_;
};

/// B_n = 1 iff p_n > tau.
inline std::vector<std::uint8_t> binarize(std::span<const double> probs, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw Error(ErrorCode::invalid_argument, "threshold outside [0, 1]");
  std::vector<std::uint8_t> out(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) out[i] = probs[i] > tau ? 1 : 0;
  return out;
}

/// Counts signals against outcomes; entries with a nonzero mask are skipped.
inline ContingencyMatrix contingency(std::span<const std::uint8_t> predicted,
                                     std::span<const std::uint8_t> actual,
                                     std::span<const std::uint8_t> mask = {}) {
  if (predicted.size() != actual.size() || (!mask.empty() && mask.size() != actual.size())) {
    throw Error(ErrorCode::dimension_mismatch, "prediction, label and mask lengths differ");
  }
  ContingencyMatrix cm;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (!mask.empty() && mask[i]) continue;
    if (actual[i]) {
      (predicted[i] ? cm.tp : cm.fn) += 1;
    } else {
      (predicted[i] ? cm.fp : cm.tn) += 1;
    }
  }
  if (cm.total() == 0) throw Error(ErrorCode::invalid_argument, "no observations left after masking");
  return cm;
}

namespace detail {
inline std::optional<double> ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}
}  // namespace detail

/// T1 = FN / (FN + TP), T2 = FP / (TN + FP); absent when the class is empty.
struct ErrorRates {
  std::optional<double> type1;
  std::optional<double> type2;
};

inline ErrorRates error_rates(const ContingencyMatrix& cm) {
  return {detail::ratio(cm.fn, cm.fn + cm.tp), detail::ratio(cm.fp, cm.tn + cm.fp)};
}

/// L(mu) = mu T1 P1 + (1 - mu) T2 P2. An undefined error rate belongs to an
/// empty class and contributes nothing.
inline double loss(const ContingencyMatrix& cm, PreferenceMu mu) {
  const ClassPriors pr = priors(cm);
  const ErrorRates er = error_rates(cm);
  return mu * er.type1.value_or(0.0) * pr.p1 + (1.0 - mu) * er.type2.value_or(0.0) * pr.p2;
}

/// Loss of the best unconditional guess (always or never signal).
inline double best_guess_loss(const ContingencyMatrix& cm, PreferenceMu mu) {
  const ClassPriors pr = priors(cm);
  return std::min(mu * pr.p1, (1.0 - mu) * pr.p2);
}

struct Usefulness {
  double absolute = 0.0;  // U_a
  double relative = 0.0;  // U_r, as a fraction
};

/// U_a = min(mu P1, (1 - mu) P2) - L(mu); U_r = U_a relative to a perfect
/// model, whose U_a equals the best-guess loss. U_r is 0 when the best guess
/// already has zero loss.
inline Usefulness usefulness(const ContingencyMatrix& cm, PreferenceMu mu) {
  const double guess = best_guess_loss(cm, mu);
  Usefulness u;
  u.absolute = guess - loss(cm, mu);
  u.relative = guess > 0.0 ? u.absolute / guess : 0.0;
  return u;
}

/// Precision and recall for crisis (C) and tranquil (T) classes, accuracy.
/// Ratios with a zero denominator are absent.
struct ClassificationMetrics {
  std::optional<double> precision_crisis;
  std::optional<double> recall_crisis;
  std::optional<double> precision_tranquil;
  std::optional<double> recall_tranquil;
  double accuracy = 0.0;
};

inline ClassificationMetrics metrics(const ContingencyMatrix& cm) {
  check_matrix(cm);
  ClassificationMetrics m;
  m.precision_crisis = detail::ratio(cm.tp, cm.fp + cm.tp);
  m.precision_tranquil = detail::ratio(cm.tn, cm.fn + cm.tn);
  m.recall_crisis = detail::ratio(cm.tp, cm.fn + cm.tp);
  m.recall_tranquil = detail::ratio(cm.tn, cm.fp + cm.tn);
  m.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
  return m;
}

namespace detail {
inline void check_two_classes(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorCode::dimension_mismatch, "score and label lengths differ");
  }
  const auto positives = std::count_if(labels.begin(), labels.end(), [](auto l) { return l != 0; });
  if (positives == 0 || positives == static_cast<std::ptrdiff_t>(labels.size())) {
    throw Error(ErrorCode::invalid_argument, "both classes must be present");
  }
}
}  // namespace detail

/// Area under the ROC curve from a threshold sweep over the distinct scores
/// with trapezoidal integration; tied scores form a diagonal segment.
inline double roc_auc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  detail::check_two_classes(scores, labels);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] > scores[b]; });

  double positives = 0.0, negatives = 0.0;
  for (auto l : labels) (l ? positives : negatives) += 1.0;

  double area = 0.0, tp = 0.0, fp = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    double new_tp = tp, new_fp = fp;
    std::size_t j = i;
    for (; j < order.size() && scores[order[j]] == scores[order[i]]; ++j) {
      (labels[order[j]] ? new_tp : new_fp) += 1.0;
    }
    area += (new_fp - fp) * (tp + new_tp) / 2.0;
    tp = new_tp;
    fp = new_fp;
    i = j;
  }
  return area / (positives * negatives);
}

/// Mann-Whitney form of the AUC via midranks.
inline double auc_rank_statistic(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  detail::check_two_classes(scores, labels);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] < scores[b]; });
  double rank_sum = 0.0, positives = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t t = i; t < j; ++t) {
      if (labels[order[t]]) {
        rank_sum += midrank;
        positives += 1.0;
      }
    }
    i = j;
  }
  const double negatives = static_cast<double>(scores.size()) - positives;
  return (rank_sum - positives * (positives + 1.0) / 2.0) / (positives * negatives);
}

/// Threshold maximising U_a over the observed score values; the smallest
/// such threshold wins ties.
inline double optimal_threshold(std::span<const double> scores, std::span<const std::uint8_t> labels,
                                PreferenceMu mu) {
  detail::check_two_classes(scores, labels);
  std::vector<double> grid(scores.begin(), scores.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  // Sweep ascending; each step moves the observations at grid[g] from
  // signalled to silent.
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] < scores[b]; });

  ContingencyMatrix cm;
  for (auto l : labels) (l ? cm.tp : cm.fp) += 1;
  double best_tau = grid.front();
  double best = -std::numeric_limits<double>::infinity();
  std::size_t cursor = 0;
  for (double tau : grid) {
    for (; cursor < order.size() && scores[order[cursor]] <= tau; ++cursor) {
      if (labels[order[cursor]]) {
        --cm.tp;
        ++cm.fn;
      } else {
        --cm.fp;
        ++cm.tn;
      }
    }
    const double ua = usefulness(cm, mu).absolute;
    if (ua > best) {
      best = ua;
      best_tau = tau;
    }
  }
  return best_tau;
}

struct EvalRow {
  double mu = 0.0;
  double tau = 0.0;
  ContingencyMatrix cm;
  ErrorRates rates;
  double loss = 0.0;
  Usefulness use;
  ClassificationMetrics stats;
};

struct EvalReport {
  std::string model;
  double auc = 0.0;
  std::vector<EvalRow> rows;
};

inline EvalRow evaluate_at(const ContingencyMatrix& cm, double mu, double tau) {
  EvalRow row;
  row.mu = mu;
  row.tau = tau;
  row.cm = cm;
  row.rates = error_rates(cm);
  row.loss = loss(cm, PreferenceMu(mu));
  row.use = usefulness(cm, PreferenceMu(mu));
  row.stats = metrics(cm);
  return row;
}

/// Evaluates a score series at the U_a-optimal threshold for every
/// preference in the grid. Masked observations are dropped first.
inline EvalReport evaluate_signals(std::string model, std::span<const double> scores,
                                   std::span<const std::uint8_t> labels,
                                   std::span<const std::uint8_t> mask, std::span<const double> mu_grid) {
  if (scores.size() != labels.size() || (!mask.empty() && mask.size() != labels.size())) {
    throw Error(ErrorCode::dimension_mismatch, "score, label and mask lengths differ");
  }
  std::vector<double> s;
  std::vector<std::uint8_t> y;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!mask.empty() && mask[i]) continue;
    s.push_back(scores[i]);
    y.push_back(labels[i]);
  }
  EvalReport report;
  report.model = std::move(model);
  report.auc = roc_auc(s, y);
  for (double mu : mu_grid) {
    const double tau = optimal_threshold(s, y, PreferenceMu(mu));
    report.rows.push_back(evaluate_at(contingency(binarize(s, tau), y), mu, tau));
  }
  return report;
}

}  // namespace riskrank
