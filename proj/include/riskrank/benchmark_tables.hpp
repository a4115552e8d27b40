#pragma once

// Published contingency counts for the European country early-warning
// benchmark (1286 country-quarters, 139 pre-crisis), one row per preference
// mu = 0.0, 0.1, ..., 1.0, for the stand-alone logit probabilities
// ("individual") and for the RiskRank-aggregated probabilities. Each row
// also carries the relative usefulness and metric cells as printed, so the
// error-rate -> loss -> usefulness chain can be replayed and compared.

#include <array>
#include <cmath>
#include <optional>
#include <string_view>
#include <vector>

#include "riskrank/evaluation.hpp"

namespace riskrank::benchmark {

struct PublishedRow {
  double mu = 0.0;
  ContingencyMatrix cm;
  double relative_usefulness_pct = 0.0;
  // Metric cells in percent; absent where the table prints "-".
  std::optional<double> precision_crisis_pct;
  std::optional<double> recall_crisis_pct;
  std::optional<double> precision_tranquil_pct;
  std::optional<double> recall_tranquil_pct;
  double accuracy_pct = 0.0;
};

struct PublishedTable {
  std::string_view name;
  std::vector<PublishedRow> rows;
};

inline PublishedTable individual_probabilities() {
  return {"individual",
          {
              {0.0, {0, 1146, 1, 139}, 0, 0.00, 0.00, 89.18, 99.91, 89.11},
              {0.1, {0, 1146, 1, 139}, -6, 0.00, 0.00, 89.18, 99.91, 89.11},
              {0.2, {0, 1146, 1, 139}, -3, 0.00, 0.00, 89.18, 99.91, 89.11},
              {0.3, {30, 1138, 9, 109}, 6, 76.92, 21.58, 91.26, 99.22, 90.82},
              {0.4, {30, 1138, 9, 109}, 12, 76.92, 21.58, 91.26, 99.22, 90.82},
              {0.5, {30, 1138, 9, 109}, 15, 76.92, 21.58, 91.26, 99.22, 90.82},
              {0.6, {98, 1052, 95, 41}, 25, 50.78, 70.50, 96.25, 91.72, 89.42},
              {0.7, {113, 1028, 119, 26}, 44, 48.71, 81.29, 97.53, 89.63, 88.72},
              {0.8, {116, 1018, 129, 23}, 60, 47.35, 83.45, 97.79, 88.75, 88.18},
              {0.9, {121, 997, 150, 18}, 73, 44.65, 87.05, 98.23, 86.92, 86.94},
              // recall (C) is printed as "1.00" although every crisis is signalled
              {1.0, {139, 0, 1147, 0}, 0, 10.81, 1.00, std::nullopt, 0.00, 10.81},
          }};
}

inline PublishedTable aggregated_probabilities() {
  return {"riskrank",
          {
              {0.0, {0, 1146, 1, 139}, 0, 0.00, 0.00, 89.18, 99.91, 89.11},
              {0.1, {0, 1146, 1, 139}, -6, 0.00, 0.00, 89.18, 99.91, 89.11},
              {0.2, {0, 1146, 1, 139}, -3, 0.00, 0.00, 89.18, 99.91, 89.11},
              {0.3, {30, 1138, 9, 109}, 7, 76.92, 21.58, 91.26, 99.22, 90.82},
              {0.4, {30, 1138, 9, 109}, 18, 76.92, 21.58, 91.26, 99.22, 90.82},
              {0.5, {45, 1127, 20, 94}, 38, 69.23, 32.37, 92.30, 98.96, 91.14},
              {0.6, {114, 1055, 92, 25}, 39, 55.34, 82.01, 97.69, 91.98, 90.90},
              {0.7, {114, 1055, 92, 25}, 54, 55.34, 82.01, 97.69, 91.98, 90.90},
              {0.8, {114, 1055, 92, 25}, 66, 55.34, 82.01, 97.69, 91.98, 90.90},
              {0.9, {122, 998, 149, 17}, 74, 45.02, 87.77, 98.33, 87.01, 87.09},
              {1.0, {139, 0, 1147, 0}, 0, 10.81, 1.00, std::nullopt, 0.00, 10.81},
          }};
}

struct ReconciledRow {
  double mu = 0.0;
  double derived_pct = 0.0;    // U_r recomputed from the counts
  double published_pct = 0.0;  // U_r as printed
  bool flagged = false;        // |derived (to 0.1 pp) - published| > tolerance
};

/// Recomputes U_r for every row and flags rows whose printed value is not
/// reproduced within `tolerance_pp` percentage points.
inline std::vector<ReconciledRow> reconcile(const PublishedTable& table, double tolerance_pp) {
  std::vector<ReconciledRow> out;
  for (const auto& row : table.rows) {
    ReconciledRow r;
    r.mu = row.mu;
    r.derived_pct = 100.0 * usefulness(row.cm, PreferenceMu(row.mu)).relative;
    r.published_pct = row.relative_usefulness_pct;
    const double rounded = std::round(r.derived_pct * 10.0) / 10.0;
    r.flagged = std::abs(rounded - r.published_pct) > tolerance_pp + 1e-9;
    out.push_back(r);
  }
  return out;
}

}  // namespace riskrank::benchmark
