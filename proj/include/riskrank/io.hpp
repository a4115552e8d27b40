#pragma once

// File formats (UTF-8 CSV with a header row, quarters as YYYY-Qn):
//
//   nodes.csv        date,node_id,level,parent_id,risk_value,self_exposure
//   links.csv        date,source_id,target_id,weight
//   indicators.csv   entity,date,<indicator 1>,...,<indicator K>
//   events.csv       entity,crisis_start,crisis_end
//   probabilities    entity,date,p
//   decompositions   date,target,individual,direct,indirect,total_raw,total
//
// plus JSON documents for fuzzy measures and the run configuration. Numbers
// are written with 10 significant digits.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "riskrank/capacity.hpp"
#include "riskrank/early_warning.hpp"
#include "riskrank/engine.hpp"
#include "riskrank/error.hpp"
#include "riskrank/evaluation.hpp"
#include "riskrank/network.hpp"
#include "riskrank/quarter.hpp"

namespace riskrank::io {

inline std::string format_number(double value) {
  if (std::isnan(value)) return "";
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.10g", value);
  return buffer;
}

inline std::string format_optional(const std::optional<double>& value) {
  return value ? format_number(*value) : "";
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot write '" + path + "'");
  out << content;
  if (!out) throw Error(ErrorCode::io, "failed writing '" + path + "'");
}

struct CsvTable {
  std::string source;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> lines;  // 1-based line number of each row

  [[noreturn]] void fail(std::size_t row, const std::string& message) const {
    throw Error(ErrorCode::parse, source + ":" + std::to_string(lines[row]) + ": " + message);
  }
};

inline std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t begin = 0;
  while (true) {
    const std::size_t comma = line.find(',', begin);
    std::string_view cell = line.substr(begin, comma == std::string_view::npos ? line.npos : comma - begin);
    while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t')) cell.remove_suffix(1);
    cells.emplace_back(cell);
    if (comma == std::string_view::npos) break;
    begin = comma + 1;
  }
  return cells;
}

/// Parses CSV text without quoting. Blank lines are skipped; every row must
/// have as many cells as the header.
inline CsvTable parse_csv(std::string_view text, std::string source) {
  CsvTable table;
  table.source = std::move(source);
  std::size_t line_no = 0;
  std::size_t pos = 0;
  if (text.starts_with("\xEF\xBB\xBF")) pos = 3;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    pos = end + 1;
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    auto cells = split_line(line);
    if (table.header.empty()) {
      table.header = std::move(cells);
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw Error(ErrorCode::parse, table.source + ":" + std::to_string(line_no) + ": expected " +
                                        std::to_string(table.header.size()) + " fields, found " +
                                        std::to_string(cells.size()));
    }
    table.rows.push_back(std::move(cells));
    table.lines.push_back(line_no);
  }
  if (table.header.empty()) throw Error(ErrorCode::parse, table.source + ": missing header row");
  return table;
}

inline CsvTable read_csv(const std::string& path) { return parse_csv(read_file(path), path); }

inline void require_header(const CsvTable& table, const std::vector<std::string>& expected) {
  if (table.header != expected) {
    std::string want;
    for (const auto& h : expected) want += (want.empty() ? "" : ",") + h;
    throw Error(ErrorCode::parse, table.source + ":1: header must be '" + want + "'");
  }
}

namespace detail {

inline std::optional<double> parse_optional_double(const CsvTable& t, std::size_t row,
                                                   const std::string& cell) {
  if (cell.empty() || cell == "NA" || cell == "NaN" || cell == "nan") return std::nullopt;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(value)) {
    t.fail(row, "invalid number '" + cell + "'");
  }
  return value;
}

inline double parse_double(const CsvTable& t, std::size_t row, const std::string& cell) {
  auto value = parse_optional_double(t, row, cell);
  if (!value) t.fail(row, "missing number");
  return *value;
}

inline int parse_int(const CsvTable& t, std::size_t row, const std::string& cell) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc{} || ptr != cell.data() + cell.size()) t.fail(row, "invalid integer '" + cell + "'");
  return value;
}

inline Quarter parse_quarter(const CsvTable& t, std::size_t row, const std::string& cell) {
  try {
    return Quarter::parse(cell);
  } catch (const Error& e) {
    t.fail(row, e.what());
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Networks

inline const std::vector<std::string> kNodesHeader = {"date",       "node_id",    "level",
                                                      "parent_id",  "risk_value", "self_exposure"};
inline const std::vector<std::string> kLinksHeader = {"date", "source_id", "target_id", "weight"};

/// Builds one snapshot per date found in the nodes table, ordered by date.
inline std::vector<NetworkSnapshot> parse_snapshots(const CsvTable& nodes, const CsvTable& links) {
  require_header(nodes, kNodesHeader);
  require_header(links, kLinksHeader);
  std::map<Quarter, std::vector<Node>> node_rows;
  std::map<Quarter, std::set<std::string>> ids;
  for (std::size_t r = 0; r < nodes.rows.size(); ++r) {
    const auto& c = nodes.rows[r];
    const Quarter date = detail::parse_quarter(nodes, r, c[0]);
    Node node;
    node.id = c[1];
    if (node.id.empty()) nodes.fail(r, "empty node_id");
    node.level = detail::parse_int(nodes, r, c[2]);
    if (node.level < 0) nodes.fail(r, "level must be >= 0");
    if (!c[3].empty()) node.parent = c[3];
    node.risk_value = detail::parse_optional_double(nodes, r, c[4]);
    if (node.risk_value && (*node.risk_value < 0.0 || *node.risk_value > 1.0)) {
      nodes.fail(r, "risk_value " + c[4] + " outside [0, 1]");
    }
    node.self_exposure = detail::parse_optional_double(nodes, r, c[5]);
    if (node.self_exposure && *node.self_exposure < 0.0) nodes.fail(r, "negative self_exposure");
    if (!ids[date].insert(node.id).second) nodes.fail(r, "duplicate node '" + node.id + "' on " + c[0]);
    node_rows[date].push_back(std::move(node));
  }

  std::map<Quarter, std::vector<Link>> link_rows;
  for (std::size_t r = 0; r < links.rows.size(); ++r) {
    const auto& c = links.rows[r];
    const Quarter date = detail::parse_quarter(links, r, c[0]);
    auto known = ids.find(date);
    if (known == ids.end()) links.fail(r, "no nodes defined for " + c[0]);
    if (!known->second.contains(c[1])) links.fail(r, "unknown source node '" + c[1] + "'");
    if (!known->second.contains(c[2])) links.fail(r, "unknown target node '" + c[2] + "'");
    const double weight = detail::parse_double(links, r, c[3]);
    if (weight < 0.0) links.fail(r, "negative link weight");
    link_rows[date].push_back({c[1], c[2], weight});
  }

  std::vector<NetworkSnapshot> snapshots;
  for (auto& [date, list] : node_rows) {
    try {
      snapshots.push_back({date, RiskNetwork(std::move(list), std::move(link_rows[date]))});
    } catch (const Error& e) {
      throw Error(ErrorCode::parse, links.source + ": " + date.str() + ": " + e.what());
    }
  }
  return snapshots;
}

inline std::vector<NetworkSnapshot> read_snapshots(const std::string& nodes_path,
                                                   const std::string& links_path) {
  return parse_snapshots(read_csv(nodes_path), read_csv(links_path));
}

inline std::string write_nodes(const std::vector<NetworkSnapshot>& snapshots) {
  std::string out = "date,node_id,level,parent_id,risk_value,self_exposure\n";
  for (const auto& s : snapshots) {
    for (const auto& n : s.network.nodes()) {
      out += s.date.str() + ',' + n.id + ',' + std::to_string(n.level) + ',' + n.parent.value_or("") +
             ',' + format_optional(n.risk_value) + ',' + format_optional(n.self_exposure) + '\n';
    }
  }
  return out;
}

inline std::string write_links(const std::vector<NetworkSnapshot>& snapshots) {
  std::string out = "date,source_id,target_id,weight\n";
  for (const auto& s : snapshots) {
    for (const auto& l : s.network.links()) {
      out += s.date.str() + ',' + l.source + ',' + l.target + ',' + format_number(l.weight) + '\n';
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Indicator panel and crisis events

/// Entities are sorted by id; quarters span the observed range without gaps
/// and unobserved cells are missing.
inline IndicatorPanel parse_indicators(const CsvTable& table) {
  if (table.header.size() < 3 || table.header[0] != "entity" || table.header[1] != "date") {
    throw Error(ErrorCode::parse, table.source + ":1: header must be 'entity,date,<indicators...>'");
  }
  std::vector<std::string> names(table.header.begin() + 2, table.header.end());
  const std::size_t k = names.size();
  std::set<std::string> entity_set;
  std::optional<Quarter> first, last;
  std::vector<Quarter> dates(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (table.rows[r][0].empty()) table.fail(r, "empty entity");
    entity_set.insert(table.rows[r][0]);
    dates[r] = detail::parse_quarter(table, r, table.rows[r][1]);
    if (!first || dates[r] < *first) first = dates[r];
    if (!last || dates[r] > *last) last = dates[r];
  }
  std::vector<std::string> entities(entity_set.begin(), entity_set.end());
  std::vector<Quarter> quarters;
  if (first) {
    for (Quarter q = *first; q <= *last; ++q) quarters.push_back(q);
  }
  std::map<std::string, std::size_t> entity_index;
  for (std::size_t e = 0; e < entities.size(); ++e) entity_index[entities[e]] = e;

  std::vector<double> values(entities.size() * quarters.size() * k, kMissing);
  std::vector<char> seen(entities.size() * quarters.size(), 0);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::size_t e = entity_index[table.rows[r][0]];
    const std::size_t q = static_cast<std::size_t>(dates[r] - *first);
    const std::size_t cell = e * quarters.size() + q;
    if (seen[cell]) table.fail(r, "duplicate row for " + table.rows[r][0] + " " + table.rows[r][1]);
    seen[cell] = 1;
    for (std::size_t c = 0; c < k; ++c) {
      values[cell * k + c] = detail::parse_optional_double(table, r, table.rows[r][c + 2]).value_or(kMissing);
    }
  }
  return IndicatorPanel(std::move(entities), std::move(quarters), std::move(names), std::move(values));
}

inline IndicatorPanel read_indicators(const std::string& path) { return parse_indicators(read_csv(path)); }

/// Rows where every indicator is missing are omitted.
inline std::string write_indicators(const IndicatorPanel& panel) {
  std::string out = "entity,date";
  for (const auto& name : panel.indicator_names()) out += ',' + name;
  out += '\n';
  for (std::size_t e = 0; e < panel.entity_count(); ++e) {
    for (std::size_t q = 0; q < panel.quarter_count(); ++q) {
      if (panel.empty_row(e, q)) continue;
      out += panel.entities()[e] + ',' + panel.quarters()[q].str();
      for (double v : panel.row(e, q)) out += ',' + format_number(v);
      out += '\n';
    }
  }
  return out;
}

inline const std::vector<std::string> kEventsHeader = {"entity", "crisis_start", "crisis_end"};

inline CrisisEvents parse_events(const CsvTable& table) {
  require_header(table, kEventsHeader);
  std::vector<CrisisEvent> events;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& c = table.rows[r];
    if (c[0].empty()) table.fail(r, "empty entity");
    CrisisEvent event{c[0], detail::parse_quarter(table, r, c[1]), std::nullopt};
    if (!c[2].empty()) event.end = detail::parse_quarter(table, r, c[2]);
    if (event.end && *event.end < event.start) table.fail(r, "crisis ends before it starts");
    events.push_back(std::move(event));
  }
  return CrisisEvents(std::move(events));
}

inline CrisisEvents read_events(const std::string& path) { return parse_events(read_csv(path)); }

inline std::string write_events(const CrisisEvents& events) {
  std::string out = "entity,crisis_start,crisis_end\n";
  for (const auto& e : events.events()) {
    out += e.entity + ',' + e.start.str() + ',' + (e.end ? e.end->str() : "") + '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Score series: backtest probabilities or RiskRank totals

struct ScoreRow {
  std::string entity;
  Quarter date;
  std::optional<double> score;
};

inline std::vector<ScoreRow> sorted_by_entity_date(std::vector<ScoreRow> rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const ScoreRow& a, const ScoreRow& b) {
    return std::tie(a.entity, a.date) < std::tie(b.entity, b.date);
  });
  return rows;
}

inline std::vector<ScoreRow> backtest_scores(const BacktestResult& result) {
  std::vector<ScoreRow> rows;
  for (const auto& p : result.predictions) {
    rows.push_back({result.entities[p.entity], p.quarter, p.probability});
  }
  return sorted_by_entity_date(std::move(rows));
}

inline std::string write_probabilities(const std::vector<ScoreRow>& rows) {
  std::string out = "entity,date,p\n";
  for (const auto& r : rows) out += r.entity + ',' + r.date.str() + ',' + format_optional(r.score) + '\n';
  return out;
}

inline const std::vector<std::string> kDecompositionHeader = {
    "date", "target", "individual", "direct", "indirect", "total_raw", "total"};

/// Accepts either the probabilities layout or a decomposition table (the
/// target becomes the entity and the clamped total the score).
inline std::vector<ScoreRow> parse_scores(const CsvTable& table) {
  std::vector<ScoreRow> rows;
  if (table.header == std::vector<std::string>{"entity", "date", "p"}) {
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const auto& c = table.rows[r];
      auto p = detail::parse_optional_double(table, r, c[2]);
      if (p && (*p < 0.0 || *p > 1.0)) table.fail(r, "probability outside [0, 1]");
      rows.push_back({c[0], detail::parse_quarter(table, r, c[1]), p});
    }
  } else if (table.header == kDecompositionHeader) {
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const auto& c = table.rows[r];
      auto p = detail::parse_optional_double(table, r, c[6]);
      if (p && (*p < 0.0 || *p > 1.0)) table.fail(r, "total outside [0, 1]");
      rows.push_back({c[1], detail::parse_quarter(table, r, c[0]), p});
    }
  } else {
    throw Error(ErrorCode::parse, table.source + ":1: header must be 'entity,date,p' or a decomposition table");
  }
  return sorted_by_entity_date(std::move(rows));
}

inline std::vector<ScoreRow> read_scores(const std::string& path) { return parse_scores(read_csv(path)); }

/// Replaces node risk values with scores keyed by (node id, date).
inline std::vector<NetworkSnapshot> apply_scores(std::vector<NetworkSnapshot> snapshots,
                                                 const std::vector<ScoreRow>& scores) {
  std::map<Quarter, std::map<std::string, double>> by_date;
  for (const auto& s : scores) {
    if (s.score) by_date[s.date][s.entity] = *s.score;
  }
  for (auto& snap : snapshots) {
    auto it = by_date.find(snap.date);
    if (it != by_date.end()) snap.network = snap.network.with_risk_values(it->second);
  }
  return snapshots;
}

inline std::string write_decompositions(const std::vector<SeriesRow>& rows) {
  std::string out = "date,target,individual,direct,indirect,total_raw,total\n";
  for (const auto& r : rows) {
    const auto& d = r.decomposition;
    out += r.date.str() + ',' + d.target + ',' + format_number(d.individual) + ',' +
           format_number(d.direct) + ',' + format_number(d.indirect) + ',' +
           format_number(d.total_raw) + ',' + format_number(d.total) + '\n';
  }
  return out;
}

inline std::string write_eval_reports(const std::vector<EvalReport>& reports) {
  std::string out =
      "model,mu,tau,TP,TN,FP,FN,T1,T2,L,U_a,U_r,AUC,precision_C,recall_C,precision_T,recall_T,"
      "accuracy\n";
  for (const auto& report : reports) {
    for (const auto& r : report.rows) {
      out += report.model + ',' + format_number(r.mu) + ',' + format_number(r.tau) + ',' +
             std::to_string(r.cm.tp) + ',' + std::to_string(r.cm.tn) + ',' +
             std::to_string(r.cm.fp) + ',' + std::to_string(r.cm.fn) + ',' +
             format_optional(r.rates.type1) + ',' + format_optional(r.rates.type2) + ',' +
             format_number(r.loss) + ',' + format_number(r.use.absolute) + ',' +
             format_number(r.use.relative) + ',' + format_number(report.auc) + ',' +
             format_optional(r.stats.precision_crisis) + ',' + format_optional(r.stats.recall_crisis) +
             ',' + format_optional(r.stats.precision_tranquil) + ',' +
             format_optional(r.stats.recall_tranquil) + ',' + format_number(r.stats.accuracy) + '\n';
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fuzzy measures as JSON: {"n": 3, "mu": {"": 0, "1": 0.2, ..., "1,2,3": 1}}
// Keys list the 1-based members of each subset in ascending order.

inline std::string subset_key(Subset subset) {
  std::string key;
  for (int i = 0; subset != 0; ++i, subset >>= 1) {
    if (subset & 1u) key += (key.empty() ? "" : ",") + std::to_string(i + 1);
  }
  return key;
}

inline Subset parse_subset_key(const std::string& key, int n) {
  Subset subset = 0;
  int previous = 0;
  for (const auto& cell : key.empty() ? std::vector<std::string>{} : split_line(key)) {
    int index = 0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), index);
    if (ec != std::errc{} || ptr != cell.data() + cell.size() || index < 1 || index > n) {
      throw Error(ErrorCode::parse, "measure key '" + key + "' has invalid member '" + cell + "'");
    }
    if (index <= previous) {
      throw Error(ErrorCode::parse, "measure key '" + key + "' must list members in ascending order");
    }
    previous = index;
    subset |= Subset{1} << (index - 1);
  }
  return subset;
}

inline nlohmann::json measure_to_json(const FuzzyMeasure& measure) {
  nlohmann::json mu = nlohmann::json::object();
  for (Subset s = 0; s <= measure.full_set(); ++s) mu[subset_key(s)] = measure(s);
  return {{"n", measure.ground_size()}, {"mu", mu}};
}

inline FuzzyMeasure measure_from_json(const nlohmann::json& doc) {
  try {
    if (!doc.is_object() || !doc.contains("n") || !doc.contains("mu") || !doc["mu"].is_object()) {
      throw Error(ErrorCode::parse, "measure JSON needs integer 'n' and object 'mu'");
    }
    const int n = doc.at("n").get<int>();
    if (n < 1 || n > FuzzyMeasure::kMaxGroundSize) {
      throw Error(ErrorCode::structural, "measure ground size " + std::to_string(n) + " out of range");
    }
    std::map<Subset, double> entries;
    for (const auto& [key, value] : doc.at("mu").items()) {
      if (!entries.emplace(parse_subset_key(key, n), value.get<double>()).second) {
        throw Error(ErrorCode::parse, "duplicate measure key '" + key + "'");
      }
    }
    return FuzzyMeasure::from_entries(n, entries);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse, std::string("measure JSON: ") + e.what());
  }
}

inline FuzzyMeasure read_measure(const std::string& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse, path + ": " + e.what());
  }
  return measure_from_json(doc);
}

// ---------------------------------------------------------------------------
// Run configuration

struct InputPaths {
  std::string nodes;
  std::string links;
  std::string indicators;
  std::string events;
  std::string probabilities;
};

struct RunConfig {
  int h1 = 5;
  int h2 = 12;
  std::vector<double> mu_grid = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  int lag = 1;
  RiskRankConfig riskrank;
  InputPaths inputs;
  std::uint64_t seed = 42;

  void validate() const {
    if (h1 < 1 || h2 < h1) throw Error(ErrorCode::invalid_argument, "horizon must satisfy 1 <= h1 <= h2");
    if (lag < 0) throw Error(ErrorCode::invalid_argument, "lag must be >= 0");
    if (riskrank.max_path_length < 1) throw Error(ErrorCode::invalid_argument, "k must be >= 1");
    for (double mu : mu_grid) {
      if (!(mu >= 0.0 && mu <= 1.0)) throw Error(ErrorCode::invalid_argument, "mu grid outside [0, 1]");
    }
  }
};

inline RunConfig config_from_json(const nlohmann::json& doc) {
  RunConfig cfg;
  try {
    if (!doc.is_object()) throw Error(ErrorCode::parse, "config must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
      if (key == "horizon") {
        if (!value.is_array() || value.size() != 2) throw Error(ErrorCode::parse, "horizon must be [h1, h2]");
        cfg.h1 = value[0].get<int>();
        cfg.h2 = value[1].get<int>();
      } else if (key == "mu_grid") {
        cfg.mu_grid = value.get<std::vector<double>>();
      } else if (key == "lag") {
        cfg.lag = value.get<int>();
      } else if (key == "seed") {
        cfg.seed = value.get<std::uint64_t>();
      } else if (key == "riskrank") {
        for (const auto& [rk, rv] : value.items()) {
          if (rk == "central_weight_mode") {
            const auto mode = rv.get<std::string>();
            if (mode == "unit") {
              cfg.riskrank.central_weight_mode = CentralWeightMode::unit;
            } else if (mode == "shapley") {
              cfg.riskrank.central_weight_mode = CentralWeightMode::shapley;
            } else {
              throw Error(ErrorCode::parse, "central_weight_mode must be 'unit' or 'shapley'");
            }
          } else if (rk == "clamp") {
            cfg.riskrank.clamp = rv.get<bool>();
          } else if (rk == "k") {
            cfg.riskrank.max_path_length = rv.get<int>();
          } else {
            throw Error(ErrorCode::parse, "unknown riskrank config key '" + rk + "'");
          }
        }
      } else if (key == "inputs") {
        for (const auto& [ik, iv] : value.items()) {
          const auto path = iv.get<std::string>();
          if (ik == "nodes") cfg.inputs.nodes = path;
          else if (ik == "links") cfg.inputs.links = path;
          else if (ik == "indicators") cfg.inputs.indicators = path;
          else if (ik == "events") cfg.inputs.events = path;
          else if (ik == "probabilities") cfg.inputs.probabilities = path;
          else throw Error(ErrorCode::parse, "unknown input key '" + ik + "'");
        }
      } else {
        throw Error(ErrorCode::parse, "unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse, std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

inline RunConfig read_config(const std::string& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse, path + ": " + e.what());
  }
  RunConfig cfg = config_from_json(doc);
  // Relative input paths are taken relative to the config file.
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  for (std::string* input : {&cfg.inputs.nodes, &cfg.inputs.links, &cfg.inputs.indicators,
                             &cfg.inputs.events, &cfg.inputs.probabilities}) {
    if (!input->empty() && std::filesystem::path(*input).is_relative()) {
      *input = (base / *input).string();
    }
  }
  return cfg;
}

}  // namespace riskrank::io
