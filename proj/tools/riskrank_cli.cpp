// riskrank: command-line front end for the riskrank library.
//
//   riskrank validate  --nodes N --links L [--indicators I] [--events E] [--measure M]
//   riskrank shapley   --measure M
//   riskrank riskrank  --nodes N --links L [--probabilities P] [--target ID]... [--out F]
//   riskrank backtest  --indicators I --events E [--h1 5 --h2 12 --lag 1 --start YYYY-Qn] [--out F]
//   riskrank evaluate  --events E --scores NAME=PATH... [--out F] | --table2-fixture
//   riskrank synth     --out-dir D [--seed S ...]
//   riskrank report    --nodes N --links L [--probabilities P] [--events E] [--out F]
//
// Every failure prints one line "riskrank: error: <code>: <message>" to
// stderr and exits nonzero.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "riskrank/riskrank.hpp"

namespace {

using namespace riskrank;

constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;

struct CommonOptions {
  std::string config_path;
  io::RunConfig config;

  void load() {
    if (!config_path.empty()) config = io::read_config(config_path);
  }
};

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-") {
    std::cout << content;
  } else {
    io::write_file(out_path, content);
  }
}

std::string require_path(const std::string& flag_value, const std::string& config_value,
                         const char* name) {
  const std::string& path = flag_value.empty() ? config_value : flag_value;
  if (path.empty()) throw Error(ErrorCode::invalid_argument, std::string("missing --") + name);
  return path;
}

std::string one_line(std::string text) {
  for (auto& c : text) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return text;
}

// --- validate -------------------------------------------------------------

struct ValidateArgs {
  std::string nodes, links, indicators, events, measure;
};

int run_validate(const ValidateArgs& args, CommonOptions& common) {
  common.load();
  const auto& in = common.config.inputs;
  std::size_t errors = 0;
  auto print = [&](const std::string& scope, const ValidationReport& report) {
    for (const auto& v : report.violations()) {
      std::cout << (v.severity == Severity::error ? "violation" : "warning") << ": " << scope << ": "
                << v.kind << ": " << v.message << '\n';
    }
    errors += report.error_count();
  };

  const std::string nodes = args.nodes.empty() ? in.nodes : args.nodes;
  const std::string links = args.links.empty() ? in.links : args.links;
  if (!nodes.empty() || !links.empty()) {
    const auto snapshots = io::read_snapshots(require_path(args.nodes, in.nodes, "nodes"),
                                              require_path(args.links, in.links, "links"));
    for (const auto& snap : snapshots) {
      const ValidationReport report = validate_hierarchy(snap.network);
      print(snap.date.str(), report);
      if (auto drift = structural_difference(snapshots.front().network, snap.network)) {
        ValidationReport r;
        r.add("structure", *drift);
        print(snap.date.str(), r);
      }
      if (!report.valid()) continue;
      const auto root = snap.network.root();
      try {
        const NodeCapacity nc = build_capacity(snap.network, snap.network.node(*root).id, CapacityMode::root);
        ValidationReport r;
        if (!nc.capacity.is_normalized(1e-9)) r.add("capacity", "root capacity is not normalized");
        if (!nc.capacity.is_monotone()) r.add("capacity", "root capacity is not monotone");
        print(snap.date.str(), r);
      } catch (const Error& e) {
        ValidationReport r;
        r.add("capacity", std::string(to_string(e.code())) + ": " + e.what());
        print(snap.date.str(), r);
      }
    }
    std::cout << "checked " << snapshots.size() << " snapshot(s)\n";
  }

  const std::string indicators = args.indicators.empty() ? in.indicators : args.indicators;
  if (!indicators.empty()) {
    const IndicatorPanel panel = io::read_indicators(indicators);
    std::cout << "indicators: " << panel.entity_count() << " entities, " << panel.quarter_count()
              << " quarters, " << panel.indicator_count() << " indicators\n";
  }
  const std::string events = args.events.empty() ? in.events : args.events;
  if (!events.empty()) {
    std::cout << "events: " << io::read_events(events).events().size() << " crises\n";
  }
  if (!args.measure.empty()) {
    const FuzzyMeasure measure = io::read_measure(args.measure);
    print("measure", validate_measure(measure));
  }
  if (errors > 0) {
    throw Error(ErrorCode::invalid_network, std::to_string(errors) + " validation error(s)");
  }
  std::cout << "valid\n";
  return 0;
}

// --- shapley --------------------------------------------------------------

int run_shapley(const std::string& measure_path) {
  const FuzzyMeasure measure = io::read_measure(measure_path);
  const ValidationReport report = validate_measure(measure);
  if (!report.valid()) {
    const auto& v = report.violations().front();
    throw Error(ErrorCode::structural, "invalid measure: " + v.kind + ": " + v.message);
  }
  const int n = measure.ground_size();
  const auto interaction = interaction_index(measure);
  nlohmann::json matrix = nlohmann::json::array();
  for (int i = 0; i < n; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < n; ++j) row.push_back(interaction[static_cast<std::size_t>(i) * n + j]);
    matrix.push_back(row);
  }
  const nlohmann::json out = {{"n", n}, {"shapley", shapley(measure)}, {"interaction", matrix}};
  std::cout << out.dump(2) << '\n';
  return 0;
}

// --- riskrank / report ----------------------------------------------------

struct NetworkArgs {
  std::string nodes, links, probabilities, out, mode;
  std::vector<std::string> targets;
  bool all_nodes = false;
  bool no_clamp = false;
  int k = 0;
};

RiskRankConfig riskrank_config(const NetworkArgs& args, const io::RunConfig& base) {
  RiskRankConfig cfg = base.riskrank;
  if (args.mode == "unit") cfg.central_weight_mode = CentralWeightMode::unit;
  else if (args.mode == "shapley") cfg.central_weight_mode = CentralWeightMode::shapley;
  else if (!args.mode.empty()) throw Error(ErrorCode::invalid_argument, "--mode must be unit or shapley");
  if (args.no_clamp) cfg.clamp = false;
  if (args.k != 0) cfg.max_path_length = args.k;
  if (cfg.max_path_length < 1) throw Error(ErrorCode::invalid_argument, "--k must be >= 1");
  return cfg;
}

std::vector<NetworkSnapshot> load_network(const NetworkArgs& args, const io::RunConfig& cfg) {
  auto snapshots = io::read_snapshots(require_path(args.nodes, cfg.inputs.nodes, "nodes"),
                                      require_path(args.links, cfg.inputs.links, "links"));
  if (snapshots.empty()) throw Error(ErrorCode::parse, "nodes file has no rows");
  const std::string probs = args.probabilities.empty() ? cfg.inputs.probabilities : args.probabilities;
  if (!probs.empty()) snapshots = io::apply_scores(std::move(snapshots), io::read_scores(probs));
  return snapshots;
}

int run_riskrank(const NetworkArgs& args, CommonOptions& common) {
  common.load();
  const RiskRankConfig cfg = riskrank_config(args, common.config);
  const auto snapshots = load_network(args, common.config);
  const RiskNetwork& net = snapshots.front().network;
  std::vector<std::string> targets = args.targets;
  if (args.all_nodes) {
    for (const auto& node : net.nodes()) targets.push_back(node.id);
  }
  if (targets.empty()) {
    auto root = net.root();
    if (!root) throw Error(ErrorCode::invalid_network, "network has no root");
    targets.push_back(net.node(*root).id);
  }
  emit(args.out, io::write_decompositions(riskrank_series(snapshots, targets, cfg)));
  return 0;
}

struct ReportArgs {
  NetworkArgs network;
  std::string events;
  int h1 = 0, h2 = 0;
};

/// Long-format time series for plotting: one row per (date, node) with the
/// node's input risk (its own value, or the link-weighted mean of its
/// children for the root), the RiskRank decomposition and, for the root,
/// the share of children in a pre-crisis state.
int run_report(const ReportArgs& args, CommonOptions& common) {
  common.load();
  io::RunConfig& base = common.config;
  if (args.h1 != 0) base.h1 = args.h1;
  if (args.h2 != 0) base.h2 = args.h2;
  base.validate();
  const RiskRankConfig cfg = riskrank_config(args.network, base);
  const auto snapshots = load_network(args.network, base);
  const RiskNetwork& shape = snapshots.front().network;

  std::optional<LabelSeries> labels;
  std::vector<std::string> children;
  std::vector<Quarter> dates;
  for (const auto& s : snapshots) dates.push_back(s.date);
  const std::string events_path = args.events.empty() ? base.inputs.events : args.events;
  const auto root = shape.root();
  if (!root) throw Error(ErrorCode::invalid_network, "network has no root");
  for (std::size_t c : shape.children(*root)) children.push_back(shape.node(c).id);
  if (!events_path.empty()) {
    std::vector<Quarter> grid;
    for (Quarter q = dates.front(); q <= dates.back(); ++q) grid.push_back(q);
    labels = label_precrisis(io::read_events(events_path), children, grid, base.h1, base.h2);
  }

  std::string out = "date,target,level,input_risk,individual,direct,indirect,total,precrisis_share\n";
  for (const auto& snap : snapshots) {
    if (auto drift = structural_difference(shape, snap.network)) {
      throw Error(ErrorCode::invalid_network, "snapshot " + snap.date.str() + " differs: " + *drift);
    }
    for (std::size_t i = 0; i < snap.network.size(); ++i) {
      const Node& node = snap.network.node(i);
      std::optional<double> input = node.risk_value;
      std::optional<double> share;
      if (node.level == 0) {
        input = weighted_individual_risk(snap.network, node.id);
        if (labels) {
          const auto q = static_cast<std::size_t>(snap.date - dates.front());
          double count = 0.0;
          for (std::size_t e = 0; e < children.size(); ++e) count += labels->label(e, q);
          share = children.empty() ? 0.0 : count / static_cast<double>(children.size());
        }
      }
      RiskDecomposition d;
      try {
        d = riskrank_target(snap, node.id, cfg);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::no_capacity) throw;
        continue;
      }
      out += snap.date.str() + ',' + node.id + ',' + std::to_string(node.level) + ',' +
             io::format_optional(input) + ',' + io::format_number(d.individual) + ',' +
             io::format_number(d.direct) + ',' + io::format_number(d.indirect) + ',' +
             io::format_number(d.total) + ',' + io::format_optional(share) + '\n';
    }
  }
  emit(args.network.out, out);
  return 0;
}

// --- backtest -------------------------------------------------------------

struct BacktestArgs {
  std::string indicators, events, out, start;
  int h1 = 0, h2 = 0, lag = -1;
};

int run_backtest(const BacktestArgs& args, CommonOptions& common) {
  common.load();
  io::RunConfig& base = common.config;
  if (args.h1 != 0) base.h1 = args.h1;
  if (args.h2 != 0) base.h2 = args.h2;
  if (args.lag >= 0) base.lag = args.lag;
  base.validate();
  const IndicatorPanel panel =
      io::read_indicators(require_path(args.indicators, base.inputs.indicators, "indicators"));
  const CrisisEvents events = io::read_events(require_path(args.events, base.inputs.events, "events"));
  BacktestOptions options;
  options.h1 = base.h1;
  options.h2 = base.h2;
  options.lag = base.lag;
  if (!args.start.empty()) options.start = Quarter::parse(args.start);
  const BacktestResult result = recursive_backtest(panel, events, options);
  emit(args.out, io::write_probabilities(io::backtest_scores(result)));
  return 0;
}

// --- evaluate -------------------------------------------------------------

struct EvaluateArgs {
  std::string events, out, mu_grid;
  std::vector<std::string> scores;
  int h1 = 0, h2 = 0;
  bool table2_fixture = false;
};

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  for (const auto& cell : io::split_line(text)) {
    try {
      std::size_t used = 0;
      grid.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw Error(ErrorCode::invalid_argument, "invalid --mu-grid value '" + cell + "'");
    }
  }
  return grid;
}

EvalReport evaluate_scores(const std::string& name, const std::vector<io::ScoreRow>& rows,
                           const CrisisEvents& events, const io::RunConfig& cfg) {
  std::set<std::string> entity_set;
  std::optional<Quarter> first, last;
  for (const auto& r : rows) {
    entity_set.insert(r.entity);
    if (!first || r.date < *first) first = r.date;
    if (!last || r.date > *last) last = r.date;
  }
  if (!first) throw Error(ErrorCode::parse, "score series '" + name + "' is empty");
  const std::vector<std::string> entities(entity_set.begin(), entity_set.end());
  std::vector<Quarter> grid;
  for (Quarter q = *first; q <= *last; ++q) grid.push_back(q);
  const LabelSeries labels = label_precrisis(events, entities, grid, cfg.h1, cfg.h2);
  std::map<std::string, std::size_t> index;
  for (std::size_t e = 0; e < entities.size(); ++e) index[entities[e]] = e;

  std::vector<double> scores;
  std::vector<std::uint8_t> y, mask;
  for (const auto& r : rows) {
    const std::size_t e = index[r.entity];
    const auto q = static_cast<std::size_t>(r.date - *first);
    scores.push_back(r.score.value_or(0.0));
    y.push_back(labels.label(e, q));
    mask.push_back(!r.score || labels.is_excluded(e, q) ? 1 : 0);
  }
  return evaluate_signals(name, scores, y, mask, cfg.mu_grid);
}

int run_table2_fixture() {
  bool ok = true;
  auto pct = [](double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.2f", v);
    return std::string(buffer);
  };
  std::cout << "table,mu,derived_U_r_pct,published_U_r_pct,status\n";
  const auto individual = benchmark::reconcile(benchmark::individual_probabilities(), 0.6);
  for (const auto& r : individual) {
    std::cout << "individual," << pct(r.mu) << ',' << pct(r.derived_pct) << ',' << pct(r.published_pct)
              << ',' << (r.flagged ? "MISMATCH" : "match") << '\n';
    ok = ok && !r.flagged;
  }
  const auto aggregated = benchmark::reconcile(benchmark::aggregated_probabilities(), 1.0);
  for (const auto& r : aggregated) {
    const bool documented = std::abs(r.mu - 0.4) < 1e-9 || std::abs(r.mu - 0.5) < 1e-9 ||
                            std::abs(r.mu - 0.6) < 1e-9;
    std::cout << "riskrank," << pct(r.mu) << ',' << pct(r.derived_pct) << ',' << pct(r.published_pct)
              << ',' << (r.flagged ? (documented ? "flagged-inconsistent" : "MISMATCH") : "match") << '\n';
    ok = ok && (r.flagged == documented);
  }
  if (!ok) throw Error(ErrorCode::invalid_argument, "reference table reconstruction failed");
  return 0;
}

int run_evaluate(const EvaluateArgs& args, CommonOptions& common) {
  if (args.table2_fixture) return run_table2_fixture();
  common.load();
  io::RunConfig& base = common.config;
  if (args.h1 != 0) base.h1 = args.h1;
  if (args.h2 != 0) base.h2 = args.h2;
  if (!args.mu_grid.empty()) base.mu_grid = parse_grid(args.mu_grid);
  base.validate();
  const CrisisEvents events = io::read_events(require_path(args.events, base.inputs.events, "events"));
  std::vector<std::pair<std::string, std::string>> series;
  for (const auto& spec : args.scores) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) {
      series.emplace_back(std::filesystem::path(spec).stem().string(), spec);
    } else {
      series.emplace_back(spec.substr(0, eq), spec.substr(eq + 1));
    }
  }
  if (series.empty() && !base.inputs.probabilities.empty()) {
    series.emplace_back("model", base.inputs.probabilities);
  }
  if (series.empty()) throw Error(ErrorCode::invalid_argument, "missing --scores");
  std::vector<EvalReport> reports;
  for (const auto& [name, path] : series) {
    reports.push_back(evaluate_scores(name, io::read_scores(path), events, base));
  }
  emit(args.out, io::write_eval_reports(reports));
  return 0;
}

// --- synth ----------------------------------------------------------------

struct SynthArgs {
  std::string out_dir, first, last;
  SynthSpec spec;
  bool seed_set = false;
};

int run_synth(SynthArgs& args, CommonOptions& common) {
  common.load();
  if (!args.seed_set) args.spec.seed = common.config.seed;
  if (!args.first.empty()) args.spec.first = Quarter::parse(args.first);
  if (!args.last.empty()) args.spec.last = Quarter::parse(args.last);
  std::filesystem::create_directories(args.out_dir);
  write_synthetic(generate_synthetic(args.spec), args.out_dir);
  std::cout << "wrote indicators.csv, events.csv, nodes.csv, links.csv to " << args.out_dir << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RiskRank: Choquet-integral aggregation of network risk and early-warning evaluation"};
  app.require_subcommand(1);
  CommonOptions common;
  app.add_option("--config", common.config_path, "JSON run configuration")->check(CLI::ExistingFile);

  ValidateArgs validate_args;
  auto* validate = app.add_subcommand("validate", "Check input files, hierarchy and capacities");
  validate->add_option("--nodes", validate_args.nodes);
  validate->add_option("--links", validate_args.links);
  validate->add_option("--indicators", validate_args.indicators);
  validate->add_option("--events", validate_args.events);
  validate->add_option("--measure", validate_args.measure, "Fuzzy measure JSON");

  std::string measure_path;
  auto* shapley_cmd = app.add_subcommand("shapley", "Shapley and interaction indices of a measure");
  shapley_cmd->add_option("--measure", measure_path)->required();

  auto add_network_options = [](CLI::App* cmd, NetworkArgs& a) {
    cmd->add_option("--nodes", a.nodes);
    cmd->add_option("--links", a.links);
    cmd->add_option("--probabilities", a.probabilities, "Override node risk values (entity,date,p)");
    cmd->add_option("--mode", a.mode, "Self weight for non-root targets: unit or shapley");
    cmd->add_flag("--no-clamp", a.no_clamp, "Do not cap node RiskRank at 1");
    cmd->add_option("--k", a.k, "Maximum path length");
    cmd->add_option("--out,-o", a.out, "Output file (default stdout)");
  };

  NetworkArgs riskrank_args;
  auto* riskrank_cmd = app.add_subcommand("riskrank", "RiskRank decompositions over snapshots");
  add_network_options(riskrank_cmd, riskrank_args);
  riskrank_cmd->add_option("--target", riskrank_args.targets, "Target node id (default: root)");
  riskrank_cmd->add_flag("--all-nodes", riskrank_args.all_nodes, "Evaluate every node");

  BacktestArgs backtest_args;
  auto* backtest = app.add_subcommand("backtest", "Recursive out-of-sample logit probabilities");
  backtest->add_option("--indicators", backtest_args.indicators);
  backtest->add_option("--events", backtest_args.events);
  backtest->add_option("--h1", backtest_args.h1, "Horizon start in quarters");
  backtest->add_option("--h2", backtest_args.h2, "Horizon end in quarters");
  backtest->add_option("--lag", backtest_args.lag, "Publication lag in quarters");
  backtest->add_option("--start", backtest_args.start, "First evaluation quarter (YYYY-Qn)");
  backtest->add_option("--out,-o", backtest_args.out);

  EvaluateArgs evaluate_args;
  auto* evaluate = app.add_subcommand("evaluate", "Usefulness and AUC tables for score series");
  evaluate->add_option("--events", evaluate_args.events);
  evaluate->add_option("--scores", evaluate_args.scores, "NAME=PATH of a probability or decomposition file");
  evaluate->add_option("--h1", evaluate_args.h1);
  evaluate->add_option("--h2", evaluate_args.h2);
  evaluate->add_option("--mu-grid", evaluate_args.mu_grid, "Comma-separated preferences");
  evaluate->add_option("--out,-o", evaluate_args.out);
  evaluate->add_flag("--table2-fixture", evaluate_args.table2_fixture,
                     "Replay the built-in reference contingency tables");

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "Generate synthetic input files");
  synth->add_option("--out-dir", synth_args.out_dir)->required();
  synth->add_option("--entities", synth_args.spec.entity_count);
  synth->add_option("--first", synth_args.first, "First quarter (YYYY-Qn)");
  synth->add_option("--last", synth_args.last, "Last quarter (YYYY-Qn)");
  synth->add_option("--indicators", synth_args.spec.indicator_count);
  synth->add_option("--intensity", synth_args.spec.crisis_intensity, "Per-quarter crisis hazard");
  synth->add_option("--density", synth_args.spec.network_density, "Share of nonzero sibling links");
  synth->add_option("--missing", synth_args.spec.missing_rate, "Share of missing indicator cells");
  auto* seed_opt = synth->add_option("--seed", synth_args.spec.seed);

  ReportArgs report_args;
  auto* report = app.add_subcommand("report", "Decomposition time series for plotting");
  add_network_options(report, report_args.network);
  report->add_option("--events", report_args.events, "Crisis events for the pre-crisis share");
  report->add_option("--h1", report_args.h1);
  report->add_option("--h2", report_args.h2);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "riskrank: error: usage: " << one_line(e.what()) << '\n';
    return kExitUsage;
  }

  try {
    if (*validate) return run_validate(validate_args, common);
    if (*shapley_cmd) return run_shapley(measure_path);
    if (*riskrank_cmd) return run_riskrank(riskrank_args, common);
    if (*backtest) return run_backtest(backtest_args, common);
    if (*evaluate) return run_evaluate(evaluate_args, common);
    if (*synth) {
      synth_args.seed_set = seed_opt->count() > 0;
      return run_synth(synth_args, common);
    }
    if (*report) return run_report(report_args, common);
  } catch (const Error& e) {
    std::cerr << "riskrank: error: " << to_string(e.code()) << ": " << one_line(e.what()) << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "riskrank: error: internal: " << one_line(e.what()) << '\n';
    return kExitValidation;
  }
  return kExitUsage;
}
