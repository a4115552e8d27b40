#pragma once

// Random instance generators and brute-force reference implementations
// shared by the unit and acceptance tests. The oracles deliberately avoid
// the library's own helpers: they enumerate permutations, subsets and node
// sequences directly.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "riskrank/riskrank.hpp"

namespace testing_support {

using riskrank::FuzzyMeasure;
using riskrank::Link;
using riskrank::Node;
using riskrank::PairCoefficient;
using riskrank::RiskNetwork;
using riskrank::Subset;
using riskrank::TwoAdditiveCapacity;

inline double uniform(std::mt19937_64& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline std::vector<double> random_point(std::mt19937_64& rng, int n) {
  std::vector<double> x(n);
  for (auto& v : x) v = uniform(rng);
  return x;
}

/// Monotone normalized measure: each set takes the largest value of its
/// maximal proper subsets plus a random increment, then everything is
/// divided by the value of the full set.
inline FuzzyMeasure random_measure(std::mt19937_64& rng, int n) {
  const Subset full = (Subset{1} << n) - 1;
  std::vector<double> raw(std::size_t{full} + 1, 0.0);
  std::vector<Subset> order(full);
  std::iota(order.begin(), order.end(), Subset{1});
  std::stable_sort(order.begin(), order.end(),
                   [](Subset a, Subset b) { return std::popcount(a) < std::popcount(b); });
  for (Subset s : order) {
    double floor = 0.0;
    for (int i = 0; i < n; ++i) {
      if (s & (Subset{1} << i)) floor = std::max(floor, raw[s & ~(Subset{1} << i)]);
    }
    raw[s] = floor + (s != full && uniform(rng) < 0.2 ? 0.0 : uniform(rng, 0.05, 1.0));
  }
  const double top = raw[full];
  return FuzzyMeasure::from_function(n, [&](Subset s) { return s == full ? 1.0 : raw[s] / top; });
}

/// Normalized, monotone 2-additive capacity with nonnegative pair masses
/// and occasionally a negative one balanced by its singletons.
inline TwoAdditiveCapacity random_two_additive(std::mt19937_64& rng, int n) {
  std::vector<double> singleton(n);
  for (auto& a : singleton) a = uniform(rng);
  std::vector<PairCoefficient> pairs;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double draw = uniform(rng);
      if (draw < 0.3) continue;
      double a = uniform(rng);
      if (draw > 0.9) a = -0.5 * std::min(singleton[i], singleton[j]) / std::max(1, n - 1);
      pairs.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), a});
    }
  }
  return TwoAdditiveCapacity(singleton, pairs).normalized();
}

// --- capacity oracles ----------------------------------------------------

/// Choquet integral by the sorted telescoping sum, sorting a copy of the
/// index list with a naive selection pass.
inline double choquet_oracle(const std::vector<double>& x, const FuzzyMeasure& mu) {
  const int n = static_cast<int>(x.size());
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (int a = 0; a < n; ++a) {
    int best = a;
    for (int b = a + 1; b < n; ++b) {
      if (x[idx[b]] < x[idx[best]]) best = b;
    }
    std::swap(idx[a], idx[best]);
  }
  double total = 0.0, prev = 0.0;
  for (int a = 0; a < n; ++a) {
    Subset upper = 0;
    for (int b = a; b < n; ++b) upper |= Subset{1} << idx[b];
    total += (x[idx[a]] - prev) * mu(upper);
    prev = x[idx[a]];
  }
  return total;
}

/// Choquet integral through the Moebius transform: sum over A of m(A) times
/// the minimum of x on A.
inline double choquet_mobius_oracle(const std::vector<double>& x, const FuzzyMeasure& mu) {
  const int n = static_cast<int>(x.size());
  const Subset full = (Subset{1} << n) - 1;
  double total = 0.0;
  for (Subset a = 1; a <= full; ++a) {
    double m = 0.0;
    for (Subset b = a;; b = (b - 1) & a) {
      m += ((std::popcount(a) - std::popcount(b)) % 2 == 0 ? 1.0 : -1.0) * mu(b);
      if (b == 0) break;
    }
    double lo = 1e300;
    for (int i = 0; i < n; ++i) {
      if (a & (Subset{1} << i)) lo = std::min(lo, x[i]);
    }
    total += m * lo;
  }
  return total;
}

/// Shapley values as average marginal contributions over all n! orderings.
inline std::vector<double> shapley_permutation_oracle(const FuzzyMeasure& mu) {
  const int n = mu.ground_size();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<double> v(n, 0.0);
  double count = 0.0;
  do {
    Subset s = 0;
    for (int i : perm) {
      v[i] += mu(s | (Subset{1} << i)) - mu(s);
      s |= Subset{1} << i;
    }
    count += 1.0;
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (auto& value : v) value /= count;
  return v;
}

inline double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

/// Shapley interaction index by explicit factorial weights over K.
inline double interaction_oracle(const FuzzyMeasure& mu, int i, int j) {
  const int n = mu.ground_size();
  const Subset bi = Subset{1} << i, bj = Subset{1} << j;
  const Subset rest = ((Subset{1} << n) - 1) & ~bi & ~bj;
  double total = 0.0;
  for (Subset k = 0; k <= rest; ++k) {
    if ((k & rest) != k) continue;
    const int s = std::popcount(k);
    const double w = factorial(n - s - 2) * factorial(s) / factorial(n - 1);
    total += w * (mu(k | bi | bj) - mu(k | bi) - mu(k | bj) + mu(k));
  }
  return total;
}

// --- networks ------------------------------------------------------------

struct NetworkShape {
  int children = 3;
  double zero_share = 0.3;  // share of sibling links with weight 0
  bool self_exposure = false;
};

/// Root "S" with children "N1".."Nm", complete sibling links and a link
/// from every child to the root, at least one of them positive.
inline RiskNetwork random_star_network(std::mt19937_64& rng, const NetworkShape& shape) {
  std::vector<Node> nodes{{"S", 0, std::nullopt, std::nullopt, std::nullopt}};
  std::vector<Link> links;
  for (int c = 0; c < shape.children; ++c) {
    const std::string id = "N" + std::to_string(c + 1);
    std::optional<double> self;
    if (shape.self_exposure && uniform(rng) < 0.5) self = uniform(rng);
    nodes.push_back({id, 1, std::string("S"), uniform(rng), self});
    links.push_back({id, "S", c == 0 ? 0.05 + uniform(rng) : (uniform(rng) < 0.15 ? 0.0 : uniform(rng))});
  }
  for (int a = 0; a < shape.children; ++a) {
    for (int b = 0; b < shape.children; ++b) {
      if (a == b) continue;
      const double w = uniform(rng) < shape.zero_share ? 0.0 : uniform(rng);
      links.push_back({"N" + std::to_string(a + 1), "N" + std::to_string(b + 1), w});
    }
  }
  return RiskNetwork(std::move(nodes), std::move(links));
}

inline std::map<std::string, double> risk_values(const RiskNetwork& net) {
  std::map<std::string, double> out;
  for (const auto& n : net.nodes()) {
    if (n.risk_value) out[n.id] = *n.risk_value;
  }
  return out;
}

/// Direct Moebius-form evaluation from link weights: singleton masses are
/// the links into the target, pair masses the two directed 2-path weight
/// products; root targets use weights divided by their total incoming
/// weight, non-root targets add a self mass and the unit individual term.
struct MobiusOracle {
  double individual = 0.0;
  double direct = 0.0;
  double indirect = 0.0;
  double total_raw() const { return individual + direct + indirect; }
};

inline MobiusOracle mobius_riskrank(const RiskNetwork& net, const std::string& target, bool unit_weight) {
  const std::size_t t = *net.index_of(target);
  const bool root = net.node(t).level == 0;
  double incoming = 0.0;
  for (const auto& l : net.links()) {
    if (l.target == target && l.source != target) incoming += l.weight;
  }
  const double scale = root ? 1.0 / incoming : 1.0;
  auto w = [&](std::size_t s, std::size_t d) {
    for (const auto& l : net.links()) {
      if (l.source == net.node(s).id && l.target == net.node(d).id) return l.weight * scale;
    }
    return 0.0;
  };
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < net.size(); ++i) {
    if (i == t || !net.node(i).risk_value) continue;
    bool reaches = w(i, t) > 0.0 || net.has_link(i, t);
    for (std::size_t j = 0; j < net.size() && !reaches; ++j) {
      reaches = j != t && j != i && net.node(j).risk_value && net.has_link(i, j) && net.has_link(j, t);
    }
    if (reaches) members.push_back(i);
  }
  double z = 0.0, direct = 0.0, indirect = 0.0;
  for (std::size_t a = 0; a < members.size(); ++a) {
    const std::size_t i = members[a];
    z += w(i, t);
    direct += w(i, t) * *net.node(i).risk_value;
    for (std::size_t b = a + 1; b < members.size(); ++b) {
      const std::size_t j = members[b];
      const double m = w(j, i) * w(i, t) + w(i, j) * w(j, t);
      z += m;
      indirect += m * *net.node(i).risk_value * *net.node(j).risk_value;
    }
  }
  double self = 0.0;
  if (!root) {
    self = net.node(t).self_exposure.value_or(std::min(incoming, 1.0));
    z += self;
  }
  MobiusOracle out;
  if (z == 0.0) {
    if (!root) out.individual = *net.node(t).risk_value;
    return out;
  }
  if (!root) out.individual = (unit_weight ? 1.0 : self / z) * *net.node(t).risk_value;
  out.direct = direct / z;
  out.indirect = indirect / z;
  return out;
}

/// Every sequence of distinct nodes v0 -> ... -> target with 1..k links
/// present in the network, found by enumerating all ordered node tuples.
inline std::vector<std::vector<std::size_t>> brute_force_paths(const RiskNetwork& net, std::size_t target,
                                                               int k) {
  std::vector<std::vector<std::size_t>> out;
  const std::size_t n = net.size();
  std::vector<std::size_t> tuple;
  auto recurse = [&](auto&& self, int remaining) -> void {
    if (!tuple.empty()) {
      std::vector<std::size_t> path = tuple;
      path.push_back(target);
      bool ok = true;
      for (std::size_t a = 0; a + 1 < path.size() && ok; ++a) ok = net.has_link(path[a], path[a + 1]);
      if (ok) out.push_back(path);
    }
    if (remaining == 0) return;
    for (std::size_t v = 0; v < n; ++v) {
      if (v == target || std::find(tuple.begin(), tuple.end(), v) != tuple.end()) continue;
      tuple.insert(tuple.begin(), v);
      self(self, remaining - 1);
      tuple.erase(tuple.begin());
    }
  };
  recurse(recurse, k);
  std::sort(out.begin(), out.end());
  return out;
}

/// The two-child example network used throughout: l(A->S)=0.6,
/// l(B->S)=0.4, l(B->A)=0.5, l(A->B)=0, x=(0.8, 0.5).
inline RiskNetwork worked_example() {
  return RiskNetwork({{"S", 0, std::nullopt, std::nullopt, std::nullopt},
                      {"A", 1, std::string("S"), 0.8, std::nullopt},
                      {"B", 1, std::string("S"), 0.5, std::nullopt}},
                     {{"A", "S", 0.6}, {"B", "S", 0.4}, {"B", "A", 0.5}, {"A", "B", 0.0}});
}

// --- early warning -------------------------------------------------------

struct LogitSample {
  std::vector<std::vector<double>> rows;
  std::vector<std::uint8_t> labels;
};

inline LogitSample logit_sample(std::mt19937_64& rng, const std::vector<double>& beta, double intercept,
                                std::size_t n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  LogitSample s;
  for (std::size_t r = 0; r < n; ++r) {
    std::vector<double> row(beta.size());
    double z = intercept;
    for (std::size_t c = 0; c < beta.size(); ++c) {
      row[c] = normal(rng);
      z += beta[c] * row[c];
    }
    s.labels.push_back(uniform(rng) < 1.0 / (1.0 + std::exp(-z)) ? 1 : 0);
    s.rows.push_back(std::move(row));
  }
  return s;
}

}  // namespace testing_support
