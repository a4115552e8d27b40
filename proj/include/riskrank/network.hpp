#pragma once

// Hierarchical risk network: a root S at level 0, children grouped under a
// parent at the level above, siblings forming a complete directed
// sub-network, and every sibling linking to its parent. Nodes other than the
// root carry a risk value in [0, 1]; links carry nonnegative weights.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "riskrank/capacity.hpp"
#include "riskrank/error.hpp"
#include "riskrank/quarter.hpp"

namespace riskrank {

struct Node {
  std::string id;
  int level = 0;
  std::optional<std::string> parent;
  std::optional<double> risk_value;
  std::optional<double> self_exposure;
};

struct Link {
  std::string source;
  std::string target;
  double weight = 0.0;
};

class RiskNetwork {
 public:
  RiskNetwork() = default;

  /// Indexes nodes and links. Duplicate ids, links between unknown nodes and
  /// repeated links are structural errors; value-level problems are left to
  /// validate_hierarchy.
  RiskNetwork(std::vector<Node> nodes, std::vector<Link> links)
      : nodes_(std::move(nodes)), links_(std::move(links)) {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (!index_.emplace(nodes_[i].id, i).second) {
        throw Error(ErrorCode::structural, "duplicate node id '" + nodes_[i].id + "'");
      }
    }
    incoming_.resize(nodes_.size());
    for (const auto& link : links_) {
      const auto source = index_of(link.source);
      const auto target = index_of(link.target);
      if (!source) throw Error(ErrorCode::structural, "link from unknown node '" + link.source + "'");
      if (!target) throw Error(ErrorCode::structural, "link to unknown node '" + link.target + "'");
      if (!weights_.emplace(key(*source, *target), link.weight).second) {
        throw Error(ErrorCode::structural,
                    "duplicate link " + link.source + " -> " + link.target);
      }
      incoming_[*target].push_back(*source);
    }
    for (auto& sources : incoming_) std::sort(sources.begin(), sources.end());
  }

  std::size_t size() const { return nodes_.size(); }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Link>& links() const { return links_; }
  const Node& node(std::size_t i) const { return nodes_[i]; }

  std::optional<std::size_t> index_of(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t require(const std::string& id) const {
    auto idx = index_of(id);
    if (!idx) throw Error(ErrorCode::invalid_argument, "unknown node '" + id + "'");
    return *idx;
  }

  bool has_link(std::size_t source, std::size_t target) const {
    return weights_.contains(key(source, target));
  }

  /// Link weight, 0 when the link is absent.
  double weight(std::size_t source, std::size_t target) const {
    auto it = weights_.find(key(source, target));
    return it == weights_.end() ? 0.0 : it->second;
  }

  /// Sources of links into `target`, ascending by node index.
  const std::vector<std::size_t>& incoming(std::size_t target) const { return incoming_[target]; }

  /// Sum of incoming link weights, self-loops excluded.
  double incoming_weight(std::size_t target) const {
    double total = 0.0;
    for (std::size_t s : incoming_[target]) {
      if (s != target) total += weight(s, target);
    }
    return total;
  }

  std::optional<std::size_t> root() const {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (nodes_[i].level == 0) return i;
    }
    return std::nullopt;
  }

  bool is_valued(std::size_t i) const { return nodes_[i].risk_value.has_value(); }
  double risk(std::size_t i) const { return nodes_[i].risk_value.value_or(0.0); }

  std::vector<std::size_t> children(std::size_t parent) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (nodes_[i].parent && *nodes_[i].parent == nodes_[parent].id) out.push_back(i);
    }
    return out;
  }

  /// Copy with the given node risk values replaced; other values are kept.
  RiskNetwork with_risk_values(const std::map<std::string, double>& values) const {
    std::vector<Node> nodes = nodes_;
    for (auto& node : nodes) {
      auto it = values.find(node.id);
      if (it != values.end()) node.risk_value = it->second;
    }
    return RiskNetwork(std::move(nodes), links_);
  }

 private:
  static std::uint64_t key(std::size_t source, std::size_t target) {
    return (static_cast<std::uint64_t>(source) << 32) | static_cast<std::uint64_t>(target);
  }

  std::vector<Node> nodes_;
  std::vector<Link> links_;
  std::unordered_map<std::string, std::size_t> index_;
  std::unordered_map<std::uint64_t, double> weights_;
  std::vector<std::vector<std::size_t>> incoming_;
};

/// Level sizes S_i and per-parent sub-network sizes S_i^j, parents in node order.
struct HierarchySpec {
  std::vector<std::size_t> level_sizes;
  std::vector<std::vector<std::size_t>> subnetwork_sizes;

  /// S_{i+1} = sum_j S_i^j for every level.
  bool consistent() const {
    if (level_sizes.empty()) return subnetwork_sizes.empty();
    if (subnetwork_sizes.size() + 1 != level_sizes.size()) return false;
    for (std::size_t i = 0; i < subnetwork_sizes.size(); ++i) {
      if (subnetwork_sizes[i].size() != level_sizes[i]) return false;
      std::size_t total = 0;
      for (auto s : subnetwork_sizes[i]) total += s;
      if (total != level_sizes[i + 1]) return false;
    }
    return true;
  }
};

inline HierarchySpec derive_hierarchy(const RiskNetwork& net) {
  HierarchySpec spec;
  int depth = 0;
  for (const auto& node : net.nodes()) depth = std::max(depth, node.level + 1);
  spec.level_sizes.assign(depth, 0);
  for (const auto& node : net.nodes()) {
    if (node.level >= 0) ++spec.level_sizes[node.level];
  }
  if (depth > 0) spec.subnetwork_sizes.resize(depth - 1);
  for (std::size_t i = 0; i < net.size(); ++i) {
    const int level = net.node(i).level;
    if (level >= 0 && level + 1 < depth) {
      spec.subnetwork_sizes[level].push_back(net.children(i).size());
    }
  }
  return spec;
}

inline ValidationReport validate_hierarchy(const RiskNetwork& net) {
  ValidationReport report;
  std::size_t roots = 0;
  for (const auto& node : net.nodes()) {
    if (node.level < 0) {
      report.add("level", "node '" + node.id + "' has negative level");
      continue;
    }
    if (node.level == 0) {
      ++roots;
      if (node.risk_value) report.add("root_value", "root '" + node.id + "' must not carry a risk value");
      if (node.parent) report.add("parent", "root '" + node.id + "' must not have a parent");
      continue;
    }
    if (!node.parent) {
      report.add("parent", "node '" + node.id + "' at level " + std::to_string(node.level) +
                               " has no parent");
    } else if (auto p = net.index_of(*node.parent); !p) {
      report.add("parent", "node '" + node.id + "' has unknown parent '" + *node.parent + "'");
    } else if (net.node(*p).level != node.level - 1) {
      report.add("level", "node '" + node.id + "' at level " + std::to_string(node.level) +
                              " has parent at level " + std::to_string(net.node(*p).level));
    }
    if (!node.risk_value) {
      report.add("risk_value", "node '" + node.id + "' has no risk value");
    } else if (!(*node.risk_value >= 0.0 && *node.risk_value <= 1.0)) {
      report.add("range", "risk value of '" + node.id + "' = " + std::to_string(*node.risk_value) +
                              " outside [0, 1]");
    }
    if (node.self_exposure && !(*node.self_exposure >= 0.0)) {
      report.add("range", "self exposure of '" + node.id + "' is negative");
    }
  }
  if (roots != 1) {
    report.add("root", "expected exactly one level-0 node, found " + std::to_string(roots));
  }

  for (const auto& link : net.links()) {
    if (!(link.weight >= 0.0) || !std::isfinite(link.weight)) {
      report.add("weight", "link " + link.source + " -> " + link.target + " has weight " +
                               std::to_string(link.weight));
    }
    if (link.source == link.target) {
      report.add("self_link", "self-link on '" + link.source + "'; use the self_exposure field");
    }
  }

  // Missing sibling or child-to-parent links are read as weight 0.
  for (std::size_t p = 0; p < net.size(); ++p) {
    const auto kids = net.children(p);
    for (std::size_t a : kids) {
      if (!net.has_link(a, p)) {
        report.add("parent_link", "no link " + net.node(a).id + " -> " + net.node(p).id,
                   Severity::warning);
      }
      for (std::size_t b : kids) {
        if (a != b && !net.has_link(a, b)) {
          report.add("completeness", "sibling link " + net.node(a).id + " -> " + net.node(b).id +
                                         " missing", Severity::warning);
        }
      }
    }
  }
  return report;
}

struct NetworkSnapshot {
  Quarter date;
  RiskNetwork network;
};

/// Describes the first structural difference between two networks, if any.
/// Node values and link weights may differ; ids, levels, parents and the
/// link set may not.
inline std::optional<std::string> structural_difference(const RiskNetwork& a, const RiskNetwork& b) {
  if (a.size() != b.size()) return "node count differs";
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Node& x = a.node(i);
    const Node& y = b.node(i);
    if (x.id != y.id || x.level != y.level || x.parent != y.parent) {
      return "node '" + x.id + "' differs";
    }
  }
  if (a.links().size() != b.links().size()) return "link count differs";
  for (const auto& link : a.links()) {
    if (!b.has_link(b.require(link.source), b.require(link.target))) {
      return "link " + link.source + " -> " + link.target + " missing";
    }
  }
  return std::nullopt;
}

enum class CapacityMode { root, central };

/// A 2-additive capacity over the nodes that influence a target. Member k
/// of the capacity is node `members[k]`; in central mode the target itself
/// is the last member (the self-loop) and has no pair interactions.
struct NodeCapacity {
  std::size_t target = 0;
  std::vector<std::size_t> members;
  std::optional<std::size_t> self_member;
  TwoAdditiveCapacity raw;       // unnormalized masses
  TwoAdditiveCapacity capacity;  // normalized to total mass 1
  double mass = 0.0;             // normalizer Z
};

namespace detail {

// Valued nodes with a path of length 1 or 2 into `target`, excluding the
// target itself, ascending by index.
inline std::vector<std::size_t> influence_set(const RiskNetwork& net, std::size_t target) {
  std::vector<char> seen(net.size(), 0);
  for (std::size_t i : net.incoming(target)) {
    if (i == target || !net.is_valued(i)) continue;
    seen[i] = 1;
    for (std::size_t j : net.incoming(i)) {
      if (j != target && j != i && net.is_valued(j)) seen[j] = 1;
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < net.size(); ++i) {
    if (seen[i]) out.push_back(i);
  }
  return out;
}

// Root mode measures links in units of the target's total incoming weight so
// the capacity is invariant to a common rescaling of all weights.
inline double link_scale(const RiskNetwork& net, std::size_t target, CapacityMode mode) {
  if (mode == CapacityMode::central) return 1.0;
  const double total = net.incoming_weight(target);
  return total > 0.0 ? 1.0 / total : 0.0;
}

inline double default_self_exposure(const RiskNetwork& net, std::size_t target) {
  const auto& node = net.node(target);
  if (node.self_exposure) return *node.self_exposure;
  return std::min(net.incoming_weight(target), 1.0);
}

// Unnormalized masses for the target; never throws on zero mass.
inline NodeCapacity capacity_masses(const RiskNetwork& net, std::size_t target, CapacityMode mode) {
  NodeCapacity out;
  out.target = target;
  out.members = influence_set(net, target);
  const double scale = link_scale(net, target, mode);
  auto w = [&](std::size_t s, std::size_t t) { return net.weight(s, t) * scale; };

  const std::size_t n = out.members.size();
  std::vector<double> singleton(n);
  std::vector<PairCoefficient> pairs;
  for (std::size_t a = 0; a < n; ++a) {
    const std::size_t i = out.members[a];
    singleton[a] = w(i, target);
    for (std::size_t b = a + 1; b < n; ++b) {
      const std::size_t j = out.members[b];
      const double mass = w(j, i) * w(i, target) + w(i, j) * w(j, target);
      if (mass != 0.0) pairs.push_back({a, b, mass});
    }
  }
  if (mode == CapacityMode::central) {
    out.self_member = n;
    out.members.push_back(target);
    singleton.push_back(default_self_exposure(net, target));
  }
  out.raw = TwoAdditiveCapacity(std::move(singleton), pairs);
  out.mass = out.raw.total_mass();
  return out;
}

}  // namespace detail

/// Builds the capacity over the target's influence set. Singleton mass is
/// the link weight into the target; the pair mass of {i, j} sums the weight
/// products of the 2-paths j -> i -> target and i -> j -> target. Central
/// mode adds the target as a self-loop member with mass equal to its self
/// exposure (default: total incoming weight capped at 1) and no pair mass.
inline NodeCapacity build_capacity(const RiskNetwork& net, const std::string& target,
                                   CapacityMode mode) {
  const std::size_t t = net.require(target);
  if (mode == CapacityMode::central && !net.is_valued(t)) {
    throw Error(ErrorCode::invalid_argument, "target '" + target + "' has no risk value");
  }
  NodeCapacity out = detail::capacity_masses(net, t, mode);
  if (!(out.mass > 0.0)) {
    throw Error(ErrorCode::no_capacity, "target '" + target + "' has no weighted incoming links");
  }
  out.capacity = out.raw.normalized();
  return out;
}

struct WeightedPath {
  std::vector<std::size_t> nodes;  // source first, target last
  double weight = 1.0;             // product of link weights

  std::size_t length() const { return nodes.size() - 1; }
};

/// All simple directed paths with 1..k links ending at `target`, in
/// depth-first order over ascending source indices.
inline std::vector<WeightedPath> k_paths(const RiskNetwork& net, const std::string& target, int k) {
  if (k < 1) throw Error(ErrorCode::invalid_argument, "path length k must be >= 1");
  const std::size_t t = net.require(target);
  std::vector<WeightedPath> out;
  std::vector<std::size_t> reversed{t};
  std::vector<char> on_path(net.size(), 0);
  on_path[t] = 1;

  auto extend = [&](auto&& self, double weight) -> void {
    const std::size_t head = reversed.back();
    for (std::size_t source : net.incoming(head)) {
      if (on_path[source]) continue;
      const double w = weight * net.weight(source, head);
      reversed.push_back(source);
      out.push_back({std::vector<std::size_t>(reversed.rbegin(), reversed.rend()), w});
      if (static_cast<int>(reversed.size()) - 1 < k) {
        on_path[source] = 1;
        self(self, w);
        on_path[source] = 0;
      }
      reversed.pop_back();
    }
  };
  extend(extend, 1.0);
  return out;
}

inline std::vector<std::string> path_ids(const RiskNetwork& net, const WeightedPath& path) {
  std::vector<std::string> ids;
  for (std::size_t i : path.nodes) ids.push_back(net.node(i).id);
  return ids;
}

}  // namespace riskrank
