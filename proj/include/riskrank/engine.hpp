#pragma once

// RiskRank: a 2-additive Choquet-style aggregation of node risk values over a
// network, with the minimum in the interaction term replaced by the product
//
//   RR = sum_i (v_i - 1/2 sum_j I_ij) x_i  +  sum_{i<j} I_ij x_i x_j
//        \______ direct effects _______/     \__ indirect effects __/
//
// For a non-root node c the node's own value enters through a self-loop
// member with weight v(c) (or 1 in unit mode) and the result may be clamped
// at 1. The k-path variant replaces 2-paths by all simple paths up to k links.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "riskrank/error.hpp"
#include "riskrank/network.hpp"
#include "riskrank/quarter.hpp"

namespace riskrank {

struct RiskDecomposition {
  std::string target;
  double individual = 0.0;
  double direct = 0.0;
  double indirect = 0.0;
  double total_raw = 0.0;
  double total = 0.0;
};

enum class CentralWeightMode { shapley, unit };

struct RiskRankConfig {
  CentralWeightMode central_weight_mode = CentralWeightMode::unit;
  bool clamp = true;
  int max_path_length = 2;
};

namespace detail {

inline void require_valid(const RiskNetwork& net) {
  const ValidationReport report = validate_hierarchy(net);
  if (!report.valid()) {
    for (const auto& v : report.violations()) {
      if (v.severity == Severity::error) {
        throw Error(ErrorCode::invalid_network, v.kind + ": " + v.message);
      }
    }
  }
}

inline RiskDecomposition finish(std::string target, double individual, double direct,
                                double indirect, bool clamp) {
  RiskDecomposition d;
  d.target = std::move(target);
  d.individual = individual;
  d.direct = direct;
  d.indirect = indirect;
  d.total_raw = individual + direct + indirect;
  d.total = clamp ? std::min(d.total_raw, 1.0) : d.total_raw;
  return d;
}

// Shapley/interaction form over a normalized capacity; the self member, if
// any, is reported as the individual effect.
inline RiskDecomposition decompose(const RiskNetwork& net, const NodeCapacity& nc,
                                   const RiskRankConfig& cfg) {
  const TwoAdditiveCapacity& cap = nc.capacity;
  const std::vector<double> v = cap.shapley();
  double individual = 0.0;
  double direct = 0.0;
  double indirect = 0.0;
  for (std::size_t a = 0; a < cap.size(); ++a) {
    const double x = net.risk(nc.members[a]);
    if (nc.self_member && a == *nc.self_member) {
      const double weight = cfg.central_weight_mode == CentralWeightMode::unit ? 1.0 : v[a];
      individual = weight * x;
      continue;
    }
    double half_interaction = 0.0;
    for (std::size_t b = 0; b < cap.size(); ++b) {
      if (b != a) half_interaction += 0.5 * cap.interaction(a, b);
    }
    direct += (v[a] - half_interaction) * x;
    for (std::size_t b = a + 1; b < cap.size(); ++b) {
      indirect += cap.interaction(a, b) * x * net.risk(nc.members[b]);
    }
  }
  const bool clamp = nc.self_member ? cfg.clamp : true;
  return finish(net.node(nc.target).id, individual, direct, indirect, clamp);
}

inline std::size_t require_root(const RiskNetwork& net) {
  auto root = net.root();
  if (!root) throw Error(ErrorCode::invalid_network, "network has no root");
  return *root;
}

inline RiskDecomposition riskrank_root_unchecked(const RiskNetwork& net) {
  const std::size_t root = require_root(net);
  const NodeCapacity nc = build_capacity(net, net.node(root).id, CapacityMode::root);
  return decompose(net, nc, RiskRankConfig{});
}

inline RiskDecomposition riskrank_node_unchecked(const RiskNetwork& net, const std::string& target,
                                                 const RiskRankConfig& cfg) {
  const std::size_t t = net.require(target);
  if (!net.is_valued(t)) {
    throw Error(ErrorCode::invalid_argument, "target '" + target + "' has no risk value");
  }
  NodeCapacity nc = capacity_masses(net, t, CapacityMode::central);
  if (!(nc.mass > 0.0)) {
    // Nothing flows into the node and it has no self exposure.
    if (cfg.central_weight_mode == CentralWeightMode::unit) {
      return finish(target, net.risk(t), 0.0, 0.0, cfg.clamp);
    }
    throw Error(ErrorCode::no_capacity, "target '" + target + "' has no incoming mass");
  }
  nc.capacity = nc.raw.normalized();
  return decompose(net, nc, cfg);
}

inline RiskDecomposition riskrank_kpath_unchecked(const RiskNetwork& net, const std::string& target,
                                                  const RiskRankConfig& cfg) {
  const int k = cfg.max_path_length;
  if (k < 1) throw Error(ErrorCode::invalid_argument, "path length k must be >= 1");
  const std::size_t t = net.require(target);
  const bool central = net.node(t).level != 0;
  if (central && !net.is_valued(t)) {
    throw Error(ErrorCode::invalid_argument, "target '" + target + "' has no risk value");
  }
  const CapacityMode mode = central ? CapacityMode::central : CapacityMode::root;
  const double scale = link_scale(net, t, mode);

  double mass = 0.0;
  double direct = 0.0;
  double indirect = 0.0;
  for (const WeightedPath& path : k_paths(net, target, k)) {
    double value = 1.0;
    bool usable = true;
    for (std::size_t i = 0; i + 1 < path.nodes.size(); ++i) {
      if (!net.is_valued(path.nodes[i])) {
        usable = false;
        break;
      }
      value *= net.risk(path.nodes[i]);
    }
    if (!usable) continue;
    double path_mass = path.weight;
    for (std::size_t step = 0; step < path.length(); ++step) path_mass *= scale;
    mass += path_mass;
    (path.length() == 1 ? direct : indirect) += path_mass * value;
  }

  const double self_mass = central ? default_self_exposure(net, t) : 0.0;
  mass += self_mass;
  if (!(mass > 0.0)) {
    if (central && cfg.central_weight_mode == CentralWeightMode::unit) {
      return finish(target, net.risk(t), 0.0, 0.0, cfg.clamp);
    }
    throw Error(ErrorCode::no_capacity, "target '" + target + "' has no incoming mass");
  }
  double individual = 0.0;
  if (central) {
    const double weight =
        cfg.central_weight_mode == CentralWeightMode::unit ? 1.0 : self_mass / mass;
    individual = weight * net.risk(t);
  }
  return finish(target, individual, direct / mass, indirect / mass, central ? cfg.clamp : true);
}

}  // namespace detail

/// Systemic risk of the root node S.
inline RiskDecomposition riskrank_root(const NetworkSnapshot& snapshot) {
  detail::require_valid(snapshot.network);
  return detail::riskrank_root_unchecked(snapshot.network);
}

/// RiskRank of a non-root node, including its own value via the self-loop.
inline RiskDecomposition riskrank_node(const NetworkSnapshot& snapshot, const std::string& target,
                                       const RiskRankConfig& cfg = {}) {
  detail::require_valid(snapshot.network);
  const std::size_t t = snapshot.network.require(target);
  if (snapshot.network.node(t).level == 0) {
    throw Error(ErrorCode::invalid_argument, "target '" + target + "' is the root; use riskrank_root");
  }
  return detail::riskrank_node_unchecked(snapshot.network, target, cfg);
}

/// RiskRank over all simple paths of up to cfg.max_path_length links into
/// the target. Each path contributes (product of weights) * (product of node
/// values on the path, target excluded), normalized by the total path mass
/// (plus the self-exposure for non-root targets). k = 2 matches the base
/// operators; k = 1 keeps direct effects only.
inline RiskDecomposition riskrank_kpath(const NetworkSnapshot& snapshot, const std::string& target,
                                        const RiskRankConfig& cfg = {}) {
  detail::require_valid(snapshot.network);
  return detail::riskrank_kpath_unchecked(snapshot.network, target, cfg);
}

/// Dispatches on the target kind and path length.
inline RiskDecomposition riskrank_target(const NetworkSnapshot& snapshot, const std::string& target,
                                         const RiskRankConfig& cfg = {}) {
  const RiskNetwork& net = snapshot.network;
  detail::require_valid(net);
  if (cfg.max_path_length != 2) return detail::riskrank_kpath_unchecked(net, target, cfg);
  if (net.node(net.require(target)).level == 0) return detail::riskrank_root_unchecked(net);
  return detail::riskrank_node_unchecked(net, target, cfg);
}

struct SeriesRow {
  Quarter date;
  RiskDecomposition decomposition;
};

/// One decomposition per (date, target), dates in snapshot order and targets
/// in the given order. All snapshots must share the first one's structure.
inline std::vector<SeriesRow> riskrank_series(const std::vector<NetworkSnapshot>& snapshots,
                                              const std::vector<std::string>& targets,
                                              const RiskRankConfig& cfg = {}) {
  std::vector<SeriesRow> rows;
  rows.reserve(snapshots.size() * targets.size());
  for (const auto& snapshot : snapshots) {
    if (auto drift = structural_difference(snapshots.front().network, snapshot.network)) {
      throw Error(ErrorCode::invalid_network,
                  "snapshot " + snapshot.date.str() + " differs in structure: " + *drift);
    }
    for (const auto& target : targets) {
      rows.push_back({snapshot.date, riskrank_target(snapshot, target, cfg)});
    }
  }
  return rows;
}

/// Link-weighted average of the risk values flowing directly into a target.
inline std::optional<double> weighted_individual_risk(const RiskNetwork& net, const std::string& target) {
  const std::size_t t = net.require(target);
  double weight = 0.0;
  double total = 0.0;
  for (std::size_t s : net.incoming(t)) {
    if (s == t || !net.is_valued(s)) continue;
    weight += net.weight(s, t);
    total += net.weight(s, t) * net.risk(s);
  }
  if (!(weight > 0.0)) return std::nullopt;
  return total / weight;
}

}  // namespace riskrank
