#pragma once

// Monotone set functions (capacities) and the aggregation operators built on
// them: the discrete Choquet integral, its 2-additive special case, the
// Shapley importance and interaction indices, and the classical averaging
// operators (weighted mean, OWA) that the Choquet integral generalises.
//
// Subsets of the ground set {0, ..., n-1} are bitmasks: bit i set means
// element i is in the subset. Element indices are 0-based in code; the JSON
// form in io.hpp uses 1-based indices.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "riskrank/error.hpp"

namespace riskrank {

using Subset = std::uint32_t;

/// Slack used when comparing measure values for monotonicity and bounds.
inline constexpr double kMeasureTolerance = 1e-12;

inline std::string format_subset(Subset subset) {
  std::string out = "{";
  bool first = true;
  for (int i = 0; subset != 0; ++i, subset >>= 1) {
    if (subset & 1u) {
      if (!first) out += ',';
      out += std::to_string(i + 1);
      first = false;
    }
  }
  return out + "}";
}

/// Dense table of a set function over all 2^n subsets.
class FuzzyMeasure {
 public:
  static constexpr int kMaxGroundSize = 20;

  FuzzyMeasure(int ground_size, std::vector<double> values)
      : n_(ground_size), values_(std::move(values)) {
    check_ground_size(n_);
    if (values_.size() != table_size(n_)) {
      throw Error(ErrorCode::structural,
                  "measure table has " + std::to_string(values_.size()) + " entries, expected " +
                      std::to_string(table_size(n_)));
    }
  }

  /// Builds from a sparse subset map; every subset must be present.
  static FuzzyMeasure from_entries(int ground_size, const std::map<Subset, double>& entries) {
    check_ground_size(ground_size);
    std::vector<double> values(table_size(ground_size));
    for (Subset s = 0; s < values.size(); ++s) {
      auto it = entries.find(s);
      if (it == entries.end()) {
        throw Error(ErrorCode::structural, "missing measure entry for subset " + format_subset(s));
      }
      values[s] = it->second;
    }
    if (entries.size() != values.size()) {
      throw Error(ErrorCode::structural, "measure has entries outside the ground set");
    }
    return FuzzyMeasure(ground_size, std::move(values));
  }

  template <typename F>
  static FuzzyMeasure from_function(int ground_size, F&& f) {
    check_ground_size(ground_size);
    std::vector<double> values(table_size(ground_size));
    for (Subset s = 0; s < values.size(); ++s) values[s] = f(s);
    return FuzzyMeasure(ground_size, std::move(values));
  }

  /// Additive measure mu(A) = sum of weights in A.
  static FuzzyMeasure additive(std::span<const double> weights) {
    const int n = static_cast<int>(weights.size());
    return from_function(n, [&](Subset s) {
      double total = 0.0;
      for (int i = 0; i < n; ++i) {
        if (s & (Subset{1} << i)) total += weights[i];
      }
      return total;
    });
  }

  /// Symmetric measure whose value depends only on |A|; by_size has n+1 entries.
  static FuzzyMeasure symmetric(std::span<const double> by_size) {
    if (by_size.empty()) throw Error(ErrorCode::structural, "symmetric measure needs sizes");
    const int n = static_cast<int>(by_size.size()) - 1;
    return from_function(n, [&](Subset s) { return by_size[std::popcount(s)]; });
  }

  int ground_size() const { return n_; }
  Subset full_set() const { return static_cast<Subset>(values_.size() - 1); }
  double operator()(Subset s) const { return values_[s]; }
  std::span<const double> values() const { return values_; }

 private:
  static std::size_t table_size(int n) { return std::size_t{1} << n; }

  static void check_ground_size(int n) {
    if (n < 1 || n > kMaxGroundSize) {
      throw Error(ErrorCode::structural,
                  "ground size " + std::to_string(n) + " outside [1, " +
                      std::to_string(kMaxGroundSize) + "]");
    }
  }

  int n_;
  std::vector<double> values_;
};

/// Checks boundary conditions, range and monotonicity. Monotonicity is
/// tested on covering pairs (A, A + {i}); any violating chain A < B contains
/// at least one violating covering pair.
inline ValidationReport validate_measure(const FuzzyMeasure& measure) {
  ValidationReport report;
  const Subset full = measure.full_set();
  if (std::abs(measure(0)) > kMeasureTolerance) {
    report.add("boundary", "mu({}) = " + std::to_string(measure(0)) + ", expected 0");
  }
  if (std::abs(measure(full) - 1.0) > kMeasureTolerance) {
    report.add("boundary", "mu(N) = " + std::to_string(measure(full)) + ", expected 1");
  }
  for (Subset a = 0; a <= full; ++a) {
    const double value = measure(a);
    if (!std::isfinite(value) || value < -kMeasureTolerance || value > 1.0 + kMeasureTolerance) {
      report.add("range", "mu(" + format_subset(a) + ") = " + std::to_string(value) +
                              " outside [0, 1]");
    }
    for (int i = 0; i < measure.ground_size(); ++i) {
      const Subset b = a | (Subset{1} << i);
      if (b == a) continue;
      if (measure(a) > measure(b) + kMeasureTolerance) {
        report.add("monotonicity", "mu(" + format_subset(a) + ") = " + std::to_string(measure(a)) +
                                       " > mu(" + format_subset(b) +
                                       ") = " + std::to_string(measure(b)));
      }
    }
  }
  return report;
}

namespace detail {

inline void check_dimension(std::size_t got, std::size_t expected) {
  if (got != expected) {
    throw Error(ErrorCode::dimension_mismatch, "input has " + std::to_string(got) +
                                                   " values, expected " + std::to_string(expected));
  }
}

// Ascending order by value, ties by original index.
inline std::vector<std::size_t> ascending_order(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  return order;
}

// binomial(n, k) as a double; exact for the ground sizes used here.
inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double result = 1.0;
  for (int i = 1; i <= k; ++i) result = result * (n - k + i) / i;
  return result;
}

}  // namespace detail

/// Discrete Choquet integral: sum over ascending x of (x_(i) - x_(i-1)) mu(C_(i)),
/// where C_(i) holds the indices of the i-th and larger values.
inline double choquet_general(std::span<const double> x, const FuzzyMeasure& measure) {
  detail::check_dimension(x.size(), static_cast<std::size_t>(measure.ground_size()));
  Subset upper = measure.full_set();
  double previous = 0.0;
  double result = 0.0;
  for (std::size_t index : detail::ascending_order(x)) {
    result += (x[index] - previous) * measure(upper);
    previous = x[index];
    upper &= ~(Subset{1} << index);
  }
  return result;
}

/// Shapley importance index of every element.
inline std::vector<double> shapley(const FuzzyMeasure& measure) {
  const int n = measure.ground_size();
  // weight[s] = (n-s-1)! s! / n! = 1 / (n * C(n-1, s))
  std::vector<double> weight(n);
  for (int s = 0; s < n; ++s) weight[s] = 1.0 / (n * detail::binomial(n - 1, s));

  std::vector<double> v(n, 0.0);
  const Subset full = measure.full_set();
  for (int i = 0; i < n; ++i) {
    const Subset bit = Subset{1} << i;
    double total = 0.0;
    for (Subset k = 0; k <= full; ++k) {
      if (k & bit) continue;
      total += weight[std::popcount(k)] * (measure(k | bit) - measure(k));
    }
    v[i] = total;
  }
  return v;
}

/// Pairwise Shapley interaction index, returned as a dense symmetric n x n
/// row-major matrix with a zero diagonal.
inline std::vector<double> interaction_index(const FuzzyMeasure& measure) {
  const int n = measure.ground_size();
  std::vector<double> result(static_cast<std::size_t>(n) * n, 0.0);
  if (n < 2) return result;
  // weight[s] = (n-s-2)! s! / (n-1)! = 1 / ((n-1) * C(n-2, s))
  std::vector<double> weight(n - 1);
  for (int s = 0; s <= n - 2; ++s) weight[s] = 1.0 / ((n - 1) * detail::binomial(n - 2, s));

  const Subset full = measure.full_set();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Subset bi = Subset{1} << i;
      const Subset bj = Subset{1} << j;
      double total = 0.0;
      for (Subset k = 0; k <= full; ++k) {
        if (k & (bi | bj)) continue;
        total += weight[std::popcount(k)] *
                 (measure(k | bi | bj) - measure(k | bi) - measure(k | bj) + measure(k));
      }
      result[static_cast<std::size_t>(i) * n + j] = total;
      result[static_cast<std::size_t>(j) * n + i] = total;
    }
  }
  return result;
}

struct PairCoefficient {
  std::size_t i = 0;
  std::size_t j = 0;
  double value = 0.0;
};

/// Capacity whose Moebius transform vanishes on subsets with more than two
/// elements. Singleton masses a_i and pair masses a_ij fully describe it; the
/// pair mass equals the interaction index I(i, j).
class TwoAdditiveCapacity {
 public:
  TwoAdditiveCapacity() = default;

  explicit TwoAdditiveCapacity(std::vector<double> singleton,
                               std::span<const PairCoefficient> pairs = {})
      : singleton_(std::move(singleton)), pair_(singleton_.size() * singleton_.size(), 0.0) {
    const std::size_t n = singleton_.size();
    for (const auto& p : pairs) {
      if (p.i >= n || p.j >= n || p.i == p.j) {
        throw Error(ErrorCode::structural, "pair coefficient (" + std::to_string(p.i) + ", " +
                                               std::to_string(p.j) + ") outside ground set");
      }
      pair_[p.i * n + p.j] += p.value;
      pair_[p.j * n + p.i] += p.value;
    }
  }

  std::size_t size() const { return singleton_.size(); }
  double singleton(std::size_t i) const { return singleton_[i]; }
  double pair(std::size_t i, std::size_t j) const { return pair_[i * size() + j]; }
  double interaction(std::size_t i, std::size_t j) const { return pair(i, j); }

  double total_mass() const {
    double total = std::accumulate(singleton_.begin(), singleton_.end(), 0.0);
    for (std::size_t i = 0; i < size(); ++i) {
      for (std::size_t j = i + 1; j < size(); ++j) total += pair(i, j);
    }
    return total;
  }

  bool is_normalized(double tolerance = 1e-12) const {
    return std::abs(total_mass() - 1.0) <= tolerance;
  }

  /// Copy with every coefficient divided by the total mass.
  TwoAdditiveCapacity normalized() const {
    const double mass = total_mass();
    if (!(mass > 0.0)) throw Error(ErrorCode::no_capacity, "capacity has no positive mass");
    TwoAdditiveCapacity out = *this;
    for (auto& a : out.singleton_) a /= mass;
    for (auto& a : out.pair_) a /= mass;
    return out;
  }

  /// v_i = a_i + 1/2 sum_j a_ij
  std::vector<double> shapley() const {
    std::vector<double> v(singleton_);
    for (std::size_t i = 0; i < size(); ++i) {
      for (std::size_t j = 0; j < size(); ++j) {
        if (j != i) v[i] += 0.5 * pair(i, j);
      }
    }
    return v;
  }

  /// The induced set function is monotone iff a_i plus every negative pair
  /// mass touching i stays nonnegative.
  bool is_monotone(double tolerance = kMeasureTolerance) const {
    for (std::size_t i = 0; i < size(); ++i) {
      double worst = singleton_[i];
      for (std::size_t j = 0; j < size(); ++j) {
        if (j != i) worst += std::min(0.0, pair(i, j));
      }
      if (worst < -tolerance) return false;
    }
    return true;
  }

  double measure(Subset subset) const {
    double total = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
      if (!(subset & (Subset{1} << i))) continue;
      total += singleton_[i];
      for (std::size_t j = i + 1; j < size(); ++j) {
        if (subset & (Subset{1} << j)) total += pair(i, j);
      }
    }
    return total;
  }

  /// Expands to the full subset table (n <= 20).
  FuzzyMeasure to_measure() const {
    return FuzzyMeasure::from_function(static_cast<int>(size()),
                                       [this](Subset s) { return measure(s); });
  }

 private:
  std::vector<double> singleton_;
  std::vector<double> pair_;
};

/// 2-additive Choquet integral in Shapley/interaction form:
///   sum_i (v_i - 1/2 sum_j |I_ij|) x_i + sum_{I>0} I min(x_i, x_j) + sum_{I<0} |I| max(x_i, x_j)
inline double choquet_2additive(std::span<const double> x, const TwoAdditiveCapacity& capacity) {
  const std::size_t n = capacity.size();
  detail::check_dimension(x.size(), n);
  const std::vector<double> v = capacity.shapley();
  double result = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double spread = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) spread += std::abs(capacity.interaction(i, j));
    }
    result += (v[i] - 0.5 * spread) * x[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double interaction = capacity.interaction(i, j);
      if (interaction > 0.0) {
        result += interaction * std::min(x[i], x[j]);
      } else if (interaction < 0.0) {
        result += -interaction * std::max(x[i], x[j]);
      }
    }
  }
  return result;
}

/// Nonnegative weights summing to one.
class WeightVector {
 public:
  static constexpr double kSumTolerance = 1e-9;

  explicit WeightVector(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) throw Error(ErrorCode::invalid_weights, "weight vector is empty");
    double sum = 0.0;
    for (double w : weights_) {
      if (!(w >= 0.0 && w <= 1.0)) {
        throw Error(ErrorCode::invalid_weights, "weight " + std::to_string(w) + " outside [0, 1]");
      }
      sum += w;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
      throw Error(ErrorCode::invalid_weights, "weights sum to " + std::to_string(sum));
    }
  }

  static WeightVector uniform(std::size_t n) { return WeightVector(std::vector<double>(n, 1.0 / n)); }

  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  std::span<const double> values() const { return weights_; }

 private:
  std::vector<double> weights_;
};

inline double weighted_mean(std::span<const double> x, const WeightVector& w) {
  detail::check_dimension(x.size(), w.size());
  double result = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) result += w[i] * x[i];
  return result;
}

/// Ordered weighted average: weights apply to x sorted in descending order.
inline double owa(std::span<const double> x, const WeightVector& w) {
  detail::check_dimension(x.size(), w.size());
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double result = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) result += w[i] * sorted[i];
  return result;
}

}  // namespace riskrank
