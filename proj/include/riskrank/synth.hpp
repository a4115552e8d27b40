#pragma once

// Deterministic synthetic inputs: an entity x quarter indicator panel whose
// first few indicators drift upward ahead of generated crises, the crisis
// events themselves, and a two-level network (root plus entities as a
// complete sibling sub-network) with slowly evolving link weights.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "riskrank/early_warning.hpp"
#include "riskrank/error.hpp"
#include "riskrank/io.hpp"
#include "riskrank/network.hpp"
#include "riskrank/quarter.hpp"

namespace riskrank {

struct SynthSpec {
  int entity_count = 12;
  Quarter first{1995, 1};
  Quarter last{2014, 4};
  int indicator_count = 14;
  double crisis_intensity = 0.015;  // per-quarter hazard of a crisis start
  double network_density = 0.6;     // share of sibling pairs with a nonzero link
  double missing_rate = 0.0;        // share of indicator cells left empty
  std::uint64_t seed = 42;
  std::string root_id = "S";

  void validate() const {
    if (entity_count < 1 || indicator_count < 1 || last < first) {
      throw Error(ErrorCode::invalid_argument, "synthetic spec needs positive counts and a quarter range");
    }
    if (!(crisis_intensity >= 0.0 && crisis_intensity <= 1.0) ||
        !(network_density >= 0.0 && network_density <= 1.0) ||
        !(missing_rate >= 0.0 && missing_rate < 1.0)) {
      throw Error(ErrorCode::invalid_argument, "synthetic rates must lie in [0, 1]");
    }
  }
};

struct SynthData {
  IndicatorPanel panel;
  CrisisEvents events;
  std::vector<NetworkSnapshot> snapshots;
};

namespace detail {
inline std::string entity_name(int i) {
  char buffer[16];
  std::snprintf(buffer, sizeof buffer, "E%02d", i + 1);
  return buffer;
}
}  // namespace detail

inline SynthData generate_synthetic(const SynthSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  const int quarters = (spec.last - spec.first) + 1;
  const int k = spec.indicator_count;
  const int signal_count = std::max(1, (k + 2) / 3);
  constexpr int kLead = 12;       // quarters of build-up before a crisis
  constexpr int kCooldown = 12;   // quarters after a crisis with no new start

  std::vector<std::string> entities;
  std::vector<Quarter> grid;
  for (int q = 0; q < quarters; ++q) grid.push_back(spec.first + q);
  for (int e = 0; e < spec.entity_count; ++e) entities.push_back(detail::entity_name(e));

  // Crises
  std::vector<CrisisEvent> events;
  std::vector<std::vector<int>> starts(spec.entity_count);
  for (int e = 0; e < spec.entity_count; ++e) {
    int q = kLead;
    while (q < quarters) {
      if (uniform(rng) < spec.crisis_intensity) {
        const int duration = 4 + static_cast<int>(uniform(rng) * 5.0);
        events.push_back({entities[e], grid[q], grid.front() + (q + duration - 1)});
        starts[e].push_back(q);
        q += duration + kCooldown;
      } else {
        ++q;
      }
    }
  }

  // Indicators: AR(1) noise plus a build-up ahead of each crisis start on
  // the signal indicators (alternating sign).
  std::vector<std::string> names;
  for (int c = 0; c < k; ++c) names.push_back("ind_" + std::to_string(c + 1));
  std::vector<double> values(static_cast<std::size_t>(spec.entity_count) * quarters * k);
  std::vector<double> vulnerability(static_cast<std::size_t>(spec.entity_count) * quarters, 0.0);
  for (int e = 0; e < spec.entity_count; ++e) {
    for (int s : starts[e]) {
      for (int q = std::max(0, s - kLead); q < s; ++q) {
        const double ramp = 1.0 - static_cast<double>(s - 1 - q) / kLead;
        auto& v = vulnerability[static_cast<std::size_t>(e) * quarters + q];
        v = std::max(v, 0.8 + 1.2 * ramp);
      }
    }
    std::vector<double> state(k, 0.0);
    for (int q = 0; q < quarters; ++q) {
      const double vul = vulnerability[static_cast<std::size_t>(e) * quarters + q];
      for (int c = 0; c < k; ++c) {
        state[c] = 0.6 * state[c] + 0.8 * normal(rng);
        double value = state[c];
        if (c < signal_count) value += (c % 2 == 0 ? 1.0 : -1.0) * vul;
        const bool missing = spec.missing_rate > 0.0 && uniform(rng) < spec.missing_rate;
        values[(static_cast<std::size_t>(e) * quarters + q) * k + c] = missing ? kMissing : value;
      }
    }
  }
  IndicatorPanel panel(entities, grid, names, std::move(values));

  // Network: fixed structure, weights drift multiplicatively.
  std::vector<double> exposure(spec.entity_count);
  for (auto& w : exposure) w = 0.5 + uniform(rng);
  std::vector<double> cross(static_cast<std::size_t>(spec.entity_count) * spec.entity_count, 0.0);
  for (int i = 0; i < spec.entity_count; ++i) {
    for (int j = 0; j < spec.entity_count; ++j) {
      if (i != j && uniform(rng) < spec.network_density) {
        cross[static_cast<std::size_t>(i) * spec.entity_count + j] = 0.05 + 0.45 * uniform(rng);
      }
    }
  }

  std::vector<NetworkSnapshot> snapshots;
  for (int q = 0; q < quarters; ++q) {
    std::vector<Node> nodes;
    nodes.push_back({spec.root_id, 0, std::nullopt, std::nullopt, std::nullopt});
    double total_exposure = 0.0;
    for (auto& w : exposure) {
      w *= std::exp(0.02 * normal(rng));
      total_exposure += w;
    }
    for (int e = 0; e < spec.entity_count; ++e) {
      // Crude risk proxy: logistic transform of the signal indicators.
      double score = 0.0;
      int seen = 0;
      for (int c = 0; c < signal_count; ++c) {
        const double v = panel.row(e, q)[c];
        if (std::isnan(v)) continue;
        score += (c % 2 == 0 ? 1.0 : -1.0) * v;
        ++seen;
      }
      const double risk = 1.0 / (1.0 + std::exp(-(1.2 * (seen ? score / seen : 0.0) - 2.0)));
      nodes.push_back({entities[e], 1, spec.root_id, std::round(risk * 1e6) / 1e6, std::nullopt});
    }
    std::vector<Link> links;
    for (int i = 0; i < spec.entity_count; ++i) {
      links.push_back({entities[i], spec.root_id, std::round(exposure[i] / total_exposure * 1e6) / 1e6});
      for (int j = 0; j < spec.entity_count; ++j) {
        if (i == j) continue;
        auto& w = cross[static_cast<std::size_t>(i) * spec.entity_count + j];
        w = std::min(1.0, w * std::exp(0.03 * normal(rng)));
        links.push_back({entities[i], entities[j], std::round(w * 1e6) / 1e6});
      }
    }
    snapshots.push_back({grid[q], RiskNetwork(std::move(nodes), std::move(links))});
  }

  return {std::move(panel), CrisisEvents(std::move(events)), std::move(snapshots)};
}

/// Writes indicators.csv, events.csv, nodes.csv and links.csv into `dir`.
inline void write_synthetic(const SynthData& data, const std::string& dir) {
  io::write_file(dir + "/indicators.csv", io::write_indicators(data.panel));
  io::write_file(dir + "/events.csv", io::write_events(data.events));
  io::write_file(dir + "/nodes.csv", io::write_nodes(data.snapshots));
  io::write_file(dir + "/links.csv", io::write_links(data.snapshots));
}

}  // namespace riskrank
