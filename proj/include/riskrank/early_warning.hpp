#pragma once

// Early-warning model: pre-crisis labels from crisis dates, a logistic
// regression on macro-financial indicators, and a recursive real-time
// backtest that refits on an increasing window at every quarter.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "riskrank/error.hpp"
#include "riskrank/quarter.hpp"

namespace riskrank {

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

/// Entity x quarter x indicator values on a shared quarterly grid. Missing
/// values are NaN.
class IndicatorPanel {
 public:
  IndicatorPanel() = default;

  IndicatorPanel(std::vector<std::string> entities, std::vector<Quarter> quarters,
                 std::vector<std::string> indicator_names, std::vector<double> values)
      : entities_(std::move(entities)),
        quarters_(std::move(quarters)),
        names_(std::move(indicator_names)),
        values_(std::move(values)) {
    for (std::size_t i = 1; i < quarters_.size(); ++i) {
      if (!(quarters_[i - 1] < quarters_[i])) {
        throw Error(ErrorCode::structural, "panel quarters must be strictly increasing");
      }
    }
    if (values_.size() != entities_.size() * quarters_.size() * names_.size()) {
      throw Error(ErrorCode::structural, "panel value count does not match its dimensions");
    }
    for (std::size_t e = 0; e < entities_.size(); ++e) entity_index_[entities_[e]] = e;
    if (entity_index_.size() != entities_.size()) {
      throw Error(ErrorCode::structural, "duplicate entity in panel");
    }
  }

  std::size_t entity_count() const { return entities_.size(); }
  std::size_t quarter_count() const { return quarters_.size(); }
  std::size_t indicator_count() const { return names_.size(); }
  const std::vector<std::string>& entities() const { return entities_; }
  const std::vector<Quarter>& quarters() const { return quarters_; }
  const std::vector<std::string>& indicator_names() const { return names_; }

  std::optional<std::size_t> entity_index(const std::string& id) const {
    auto it = entity_index_.find(id);
    if (it == entity_index_.end()) return std::nullopt;
    return it->second;
  }

  std::span<const double> row(std::size_t entity, std::size_t quarter) const {
    return std::span<const double>(values_).subspan(offset(entity, quarter), names_.size());
  }

  bool complete(std::size_t entity, std::size_t quarter) const {
    for (double v : row(entity, quarter)) {
      if (std::isnan(v)) return false;
    }
    return true;
  }

  bool empty_row(std::size_t entity, std::size_t quarter) const {
    for (double v : row(entity, quarter)) {
      if (!std::isnan(v)) return false;
    }
    return true;
  }

 private:
  std::size_t offset(std::size_t e, std::size_t q) const {
    return (e * quarters_.size() + q) * names_.size();
  }

  std::vector<std::string> entities_;
  std::vector<Quarter> quarters_;
  std::vector<std::string> names_;
  std::vector<double> values_;
  std::map<std::string, std::size_t> entity_index_;
};

struct CrisisEvent {
  std::string entity;
  Quarter start;
  std::optional<Quarter> end;  // absent: ongoing through the end of the data
};

class CrisisEvents {
 public:
  CrisisEvents() = default;
  explicit CrisisEvents(std::vector<CrisisEvent> events) : events_(std::move(events)) {
    for (const auto& e : events_) {
      if (e.end && *e.end < e.start) {
        throw Error(ErrorCode::structural, "crisis of '" + e.entity + "' ends before it starts");
      }
    }
  }

  const std::vector<CrisisEvent>& events() const { return events_; }
  bool empty() const { return events_.empty(); }

 private:
  std::vector<CrisisEvent> events_;
};

/// Binary pre-crisis labels C_n(h) on an entity x quarter grid, with a mask
/// for observations that are neither tranquil nor pre-crisis.
struct LabelSeries {
  std::size_t entity_count = 0;
  std::size_t quarter_count = 0;
  std::vector<std::uint8_t> labels;
  std::vector<std::uint8_t> excluded;

  std::size_t at(std::size_t entity, std::size_t quarter) const {
    return entity * quarter_count + quarter;
  }
  std::uint8_t label(std::size_t entity, std::size_t quarter) const { return labels[at(entity, quarter)]; }
  bool is_excluded(std::size_t entity, std::size_t quarter) const {
    return excluded[at(entity, quarter)] != 0;
  }
};

/// Quarter q of an entity is labelled 1 iff one of its crises starts within
/// [q + h1, q + h2]. Quarters inside a crisis episode are excluded.
inline LabelSeries label_precrisis(const CrisisEvents& events, const std::vector<std::string>& entities,
                                   const std::vector<Quarter>& quarters, int h1, int h2) {
  if (h1 < 1 || h2 < h1) {
    throw Error(ErrorCode::invalid_argument, "horizon must satisfy 1 <= h1 <= h2");
  }
  LabelSeries out;
  out.entity_count = entities.size();
  out.quarter_count = quarters.size();
  out.labels.assign(entities.size() * quarters.size(), 0);
  out.excluded.assign(entities.size() * quarters.size(), 0);
  if (quarters.empty()) return out;
  const Quarter last = quarters.back();

  for (std::size_t e = 0; e < entities.size(); ++e) {
    for (const auto& event : events.events()) {
      if (event.entity != entities[e]) continue;
      const Quarter end = event.end.value_or(std::max(last, event.start));
      for (std::size_t q = 0; q < quarters.size(); ++q) {
        if (quarters[q] >= event.start && quarters[q] <= end) out.excluded[out.at(e, q)] = 1;
        const int lead = event.start - quarters[q];
        if (lead >= h1 && lead <= h2) out.labels[out.at(e, q)] = 1;
      }
    }
  }
  for (std::size_t i = 0; i < out.labels.size(); ++i) {
    if (out.excluded[i]) out.labels[i] = 0;
  }
  return out;
}

/// Panel variant: observations with no indicator data at all are excluded too.
inline LabelSeries label_precrisis(const CrisisEvents& events, const IndicatorPanel& panel, int h1,
                                   int h2) {
  LabelSeries out = label_precrisis(events, panel.entities(), panel.quarters(), h1, h2);
  for (std::size_t e = 0; e < panel.entity_count(); ++e) {
    for (std::size_t q = 0; q < panel.quarter_count(); ++q) {
      if (panel.empty_row(e, q)) {
        out.excluded[out.at(e, q)] = 1;
        out.labels[out.at(e, q)] = 0;
      }
    }
  }
  return out;
}

struct LogitModel {
  std::vector<double> coefficients;
  double intercept = 0.0;
  std::optional<Quarter> training_end;
  std::size_t training_rows = 0;
  int iterations = 0;
  bool converged = false;
};

struct LogitOptions {
  double ridge = 1e-6;
  double tolerance = 1e-8;
  int max_iterations = 100;
};

namespace detail {

inline double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow
inline double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

}  // namespace detail

/// Ridge-penalised logistic regression fitted by Newton/IRLS with step
/// halving. Indicators are standardised internally (zero-variance indicators
/// get a zero coefficient) and the penalty applies on that scale. Rows with
/// any missing value are dropped.
inline LogitModel fit_logit(const std::vector<std::vector<double>>& rows,
                            std::span<const std::uint8_t> labels, const LogitOptions& options = {}) {
  if (rows.size() != labels.size()) {
    throw Error(ErrorCode::dimension_mismatch, "row and label counts differ");
  }
  const std::size_t k = rows.empty() ? 0 : rows.front().size();
  std::vector<std::size_t> used;
  std::size_t positives = 0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != k) throw Error(ErrorCode::dimension_mismatch, "ragged indicator rows");
    if (std::any_of(rows[r].begin(), rows[r].end(), [](double v) { return std::isnan(v); })) continue;
    used.push_back(r);
    positives += labels[r] ? 1 : 0;
  }
  if (positives == 0 || positives == used.size()) {
    throw Error(ErrorCode::degenerate_fit, "logistic fit needs both classes, got " +
                                               std::to_string(positives) + " positives in " +
                                               std::to_string(used.size()) + " rows");
  }

  const std::size_t m = used.size();
  std::vector<double> mean(k, 0.0), sd(k, 0.0);
  for (std::size_t r : used) {
    for (std::size_t c = 0; c < k; ++c) mean[c] += rows[r][c];
  }
  for (auto& v : mean) v /= static_cast<double>(m);
  for (std::size_t r : used) {
    for (std::size_t c = 0; c < k; ++c) sd[c] += (rows[r][c] - mean[c]) * (rows[r][c] - mean[c]);
  }
  std::vector<std::size_t> active;
  for (std::size_t c = 0; c < k; ++c) {
    sd[c] = std::sqrt(sd[c] / static_cast<double>(m));
    if (sd[c] > 1e-12 * (1.0 + std::abs(mean[c]))) active.push_back(c);
  }

  const Eigen::Index p = static_cast<Eigen::Index>(active.size()) + 1;
  Eigen::MatrixXd design(static_cast<Eigen::Index>(m), p);
  Eigen::VectorXd y(static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    const auto& row = rows[used[i]];
    design(i, 0) = 1.0;
    for (std::size_t a = 0; a < active.size(); ++a) {
      const std::size_t c = active[a];
      design(i, static_cast<Eigen::Index>(a) + 1) = (row[c] - mean[c]) / sd[c];
    }
    y(i) = labels[used[i]] ? 1.0 : 0.0;
  }

  auto objective = [&](const Eigen::VectorXd& beta) {
    const Eigen::VectorXd eta = design * beta;
    double ll = 0.0;
    for (Eigen::Index i = 0; i < eta.size(); ++i) ll += y(i) * eta(i) - detail::softplus(eta(i));
    return ll - 0.5 * options.ridge * beta.squaredNorm();
  };

  LogitModel model;
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  double current = objective(beta);
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    model.iterations = iter + 1;
    const Eigen::VectorXd eta = design * beta;
    Eigen::VectorXd prob(eta.size()), weight(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
      prob(i) = detail::sigmoid(eta(i));
      weight(i) = prob(i) * (1.0 - prob(i));
    }
    const Eigen::VectorXd gradient = design.transpose() * (y - prob) - options.ridge * beta;
    Eigen::MatrixXd hessian = design.transpose() * weight.asDiagonal() * design;
    hessian.diagonal().array() += options.ridge;
    const Eigen::VectorXd step = hessian.ldlt().solve(gradient);

    double scale = 1.0;
    Eigen::VectorXd candidate = beta + step;
    double next = objective(candidate);
    for (int halving = 0; halving < 40 && next < current; ++halving) {
      scale *= 0.5;
      candidate = beta + scale * step;
      next = objective(candidate);
    }
    const double change = (scale * step).cwiseAbs().maxCoeff();
    if (next >= current) {
      beta = candidate;
      current = next;
    }
    if (change < options.tolerance) {
      model.converged = true;
      break;
    }
  }

  model.coefficients.assign(k, 0.0);
  model.intercept = beta(0);
  for (std::size_t a = 0; a < active.size(); ++a) {
    const std::size_t c = active[a];
    const double b = beta(static_cast<Eigen::Index>(a) + 1);
    model.coefficients[c] = b / sd[c];
    model.intercept -= b * mean[c] / sd[c];
  }
  model.training_rows = m;
  return model;
}

/// Logistic link of the linear score; no prediction when a value is missing.
inline std::optional<double> predict_prob(const LogitModel& model, std::span<const double> row) {
  if (row.size() != model.coefficients.size()) {
    throw Error(ErrorCode::dimension_mismatch, "indicator row has " + std::to_string(row.size()) +
                                                   " values, model expects " +
                                                   std::to_string(model.coefficients.size()));
  }
  double score = model.intercept;
  for (std::size_t c = 0; c < row.size(); ++c) {
    if (std::isnan(row[c])) return std::nullopt;
    score += model.coefficients[c] * row[c];
  }
  return detail::sigmoid(score);
}

struct BacktestOptions {
  int h1 = 5;
  int h2 = 12;
  int lag = 1;
  std::optional<Quarter> start;  // default: earliest quarter leaving the minimum history
  LogitOptions logit;
};

inline constexpr int kMinTrainingQuarters = 8;

struct Prediction {
  std::size_t entity = 0;
  Quarter quarter;
  std::optional<double> probability;  // absent: no model or missing indicators
  std::optional<Quarter> training_end;
  std::size_t training_rows = 0;
};

struct BacktestResult {
  std::vector<std::string> entities;
  std::vector<Prediction> predictions;  // ordered by (quarter, entity)
  int lag = 1;
};

/// Recursive out-of-sample exercise. For every evaluation quarter t >= start
/// a model is fitted on all labelled, non-excluded, complete observations
/// dated no later than t - lag and used to predict every entity at t. If the
/// window lacks one of the classes the quarter's predictions are masked.
inline BacktestResult recursive_backtest(const IndicatorPanel& panel, const CrisisEvents& events,
                                         const BacktestOptions& options = {}) {
  if (options.lag < 0) throw Error(ErrorCode::invalid_argument, "publication lag must be >= 0");
  BacktestResult result;
  result.entities = panel.entities();
  result.lag = options.lag;
  if (panel.quarter_count() == 0) return result;

  const Quarter first = panel.quarters().front();
  const Quarter earliest = first + (kMinTrainingQuarters - 1) + options.lag;
  const Quarter start = options.start.value_or(earliest);
  if (start < earliest) {
    throw Error(ErrorCode::insufficient_data,
                "backtest start " + start.str() + " leaves fewer than " +
                    std::to_string(kMinTrainingQuarters) + " training quarters; earliest is " +
                    earliest.str());
  }

  const LabelSeries labels = label_precrisis(events, panel, options.h1, options.h2);
  const auto& quarters = panel.quarters();

  std::vector<std::vector<double>> rows;
  std::vector<std::uint8_t> y;
  std::optional<Quarter> window_end;
  std::size_t next_quarter = 0;  // first quarter index not yet in the window

  for (std::size_t t = 0; t < quarters.size(); ++t) {
    if (quarters[t] < start) continue;
    const Quarter cutoff = quarters[t] - options.lag;
    for (; next_quarter < quarters.size() && quarters[next_quarter] <= cutoff; ++next_quarter) {
      for (std::size_t e = 0; e < panel.entity_count(); ++e) {
        if (labels.is_excluded(e, next_quarter) || !panel.complete(e, next_quarter)) continue;
        const auto row = panel.row(e, next_quarter);
        rows.emplace_back(row.begin(), row.end());
        y.push_back(labels.label(e, next_quarter));
        window_end = quarters[next_quarter];
      }
    }

    std::optional<LogitModel> model;
    try {
      model = fit_logit(rows, y, options.logit);
      model->training_end = window_end;
    } catch (const Error& err) {
      if (err.code() != ErrorCode::degenerate_fit) throw;
    }
    for (std::size_t e = 0; e < panel.entity_count(); ++e) {
      Prediction pred;
      pred.entity = e;
      pred.quarter = quarters[t];
      if (model) {
        pred.probability = predict_prob(*model, panel.row(e, t));
        pred.training_end = model->training_end;
        pred.training_rows = model->training_rows;
      }
      result.predictions.push_back(pred);
    }
  }
  return result;
}

}  // namespace riskrank
