#include "balancer/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "balancer/balance.hpp"
#include "balancer/coalition.hpp"
#include "balancer/csv.hpp"
#include "balancer/dot.hpp"
#include "balancer/errors.hpp"
#include "balancer/evaluate.hpp"
#include "balancer/ingest.hpp"
#include "balancer/io.hpp"
#include "balancer/scoring.hpp"

namespace balancer {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;
constexpr int kExitInvariant = 3;

struct RunConfig {
  std::string input;
  std::string output;  // single-file output (ingest, export)
  std::string out_dir = ".";
  std::string coefficients;
  std::string pairs;
  std::string partition;
  std::string manifest;
  std::string subset;
  std::string stage = "all";
  std::string merge = "mean";
  std::string exchange_transform = "ratio_minus_one";
  std::optional<double> border_domain_max;
  bool impute = false;
  unsigned jobs = 1;

  std::uint64_t seed = 0;
  double threshold_fraction = kDefaultThresholdFraction;
  std::optional<std::uint64_t> max_flips;
  std::uint32_t max_rejections = 64;
  double min_magnitude = 1e-6;
  std::uint64_t trace_every = 1000;
  std::uint64_t audit_every = 0;

  IngestOptions ingest_options() const {
    IngestOptions o;
    o.impute = impute;
    o.exchange_transform = parse_exchange_transform(exchange_transform);
    o.border_max_override = border_domain_max;
    return o;
  }

  BalanceConfig balance_config() const {
    BalanceConfig c;
    c.seed = seed;
    c.threshold_fraction = threshold_fraction;
    c.max_flips = max_flips;
    c.max_rejections_per_draw = max_rejections;
    c.min_magnitude = min_magnitude;
    c.trace_every = trace_every;
    c.audit_every = audit_every;
    return c;
  }

  CoefficientSet coefficient_set() const {
    return coefficients.empty() ? CoefficientSet{} : load_coefficients(coefficients);
  }
};

void configure_logging() {
  static bool done = false;
  if (!done) {
    auto logger = spdlog::stderr_logger_mt("balancer");
    logger->set_pattern("[%l] %v");
    spdlog::set_default_logger(logger);
    done = true;
  }
  spdlog::level::level_enum level = spdlog::level::info;
  if (const char *env = std::getenv("BALANCER_LOG")) level = spdlog::level::from_str(env);
  spdlog::set_level(level);
}

template <typename F>
auto run_stage(std::string_view name, F &&body) {
  try {
    return body();
  } catch (const ValidationError &e) {
    throw ValidationError("stage '" + std::string(name) + "': " + e.what());
  } catch (const InvariantViolation &e) {
    throw InvariantViolation("stage '" + std::string(name) + "': " + e.what());
  }
}

std::vector<std::string> split_list(const std::string &s) {
  std::vector<std::string> out;
  for (auto &part : csv::split_line(s)) {
    auto t = csv::trim(part);
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

void require_file(const std::string &path, std::string_view flag) {
  if (path.empty()) throw ValidationError(std::string(flag) + " is required");
  if (!fs::is_regular_file(path)) throw ValidationError("input file not found: " + path);
}

json stats_json(const Dataset &ds) {
  json j;
  j["nations"] = ds.nations.size();
  j["rows"] = ds.records.size();
  j["imputed_rows"] = ds.imputed_rows;
  j["warnings"] = ds.warnings.size();
  json factors;
  for (std::size_t k = 0; k < kFactorCount; ++k) {
    const auto f = static_cast<Factor>(k);
    factors[std::string(factor_column(f))] = {{"min", ds.stats[f].min}, {"max", ds.stats[f].max}};
  }
  j["factors"] = factors;
  return j;
}

json balance_json(const BalanceTrace &t, const BalanceConfig &c) {
  json j;
  j["seed"] = c.seed;
  j["threshold_fraction"] = c.threshold_fraction;
  j["total_triangles"] = t.total_triangles;
  j["target_unstable"] = t.target_unstable;
  j["max_flips"] = t.max_flips;
  j["initial_unstable"] = t.initial_unstable;
  j["flips_applied"] = t.flips_applied;
  j["final_unstable"] = t.final_unstable;
  j["final_ratio"] = t.final_ratio;
  j["terminated_by"] = std::string(to_string(t.terminated_by));
  j["fallback_draws"] = t.fallback_draws;
  j["audits_run"] = t.audits_run;
  return j;
}

std::string dump(const json &j) { return j.dump(2) + "\n"; }

// Each stage writes its artifacts into `dir` and returns the names it wrote.
using Written = std::vector<std::string>;

void put(const fs::path &dir, const std::string &name, std::string_view content, Written &written) {
  io::write_file_atomic(dir / name, content);
  written.push_back(name);
}

std::vector<NormalizedRecord> stage_ingest(const RunConfig &cfg, const fs::path &normalized_path,
                                           std::optional<fs::path> stats_path) {
  const auto opts = cfg.ingest_options();
  const Dataset ds = load_dataset(cfg.input, opts);
  for (const auto &w : ds.warnings) spdlog::warn("{}", w);
  spdlog::info("ingest: {} nations, {} rows ({} imputed)", ds.nations.size(), ds.records.size(), ds.imputed_rows);
  const std::size_t n = ds.nations.size();
  if (ds.records.size() != n * (n - 1))
    throw InvariantViolation("directed row count " + std::to_string(ds.records.size()) + " != n(n-1)");
  auto normalized = normalize_dataset(ds, opts);
  io::write_file_atomic(normalized_path, format_normalized_csv(normalized));
  const std::string stats = dump(stats_json(ds));
  if (stats_path) io::write_file_atomic(*stats_path, stats);
  std::cout << stats;
  return normalized;
}

SignedGraph stage_score(const RunConfig &cfg, const std::vector<NormalizedRecord> &records, const fs::path &dir,
                        Written &written) {
  auto scored = build_graph(records, cfg.coefficient_set(), parse_merge_rule(cfg.merge));
  spdlog::info("score: {} nations, {} undirected edges", scored.graph.node_count(), scored.graph.edge_count());
  put(dir, "directed_scores.csv", format_directed_scores(scored.directed), written);
  put(dir, "edges.csv", format_edge_list(scored.graph), written);
  return std::move(scored.graph);
}

SignedGraph stage_balance(const RunConfig &cfg, SignedGraph g, const fs::path &dir, Written &written) {
  const auto bc = cfg.balance_config();
  if (g.node_count() < 3) spdlog::warn("balance: fewer than 3 nations, nothing to balance");
  auto outcome = run_balance(std::move(g), bc);
  const auto &t = outcome.trace;
  spdlog::info("balance: {} flips, unstable {} -> {} (target {}), stable ratio {:.4f}, stopped by {}",
               t.flips_applied, t.initial_unstable, t.final_unstable, t.target_unstable, t.final_ratio,
               to_string(t.terminated_by));
  put(dir, "balanced_edges.csv", format_edge_list(outcome.graph), written);
  put(dir, "trace.csv", format_trace_csv(t), written);
  put(dir, "balance_summary.json", dump(balance_json(t, bc)), written);
  return std::move(outcome.graph);
}

CoalitionResult stage_coalitions(const RunConfig &cfg, const SignedGraph &g, const fs::path &dir,
                                 Written &written) {
  const auto pairs = load_eval_set(cfg.pairs);
  auto sweep = sweep_starts(g, pairs, cfg.jobs);
  spdlog::info("coalitions: best start '{}' with {}/{} correct; |set1|={}, |set2|={}", sweep.best.start,
               sweep.best_report.correct, sweep.best_report.total, sweep.best.set1.size(), sweep.best.set2.size());
  put(dir, "partition.json", format_partition_json(sweep.best), written);
  put(dir, "partition.csv", format_partition_csv(sweep.best), written);
  put(dir, "assignment.csv", format_assignment_csv(sweep.best), written);
  put(dir, "start_scores.csv", format_start_scores_csv(sweep.table), written);
  put(dir, "evaluation.csv", format_report_csv(sweep.best_report), written);
  put(dir, "evaluation.json", format_report_json(sweep.best_report), written);
  put(dir, "coalitions.dot", format_dot(g, sweep.best.partition()), written);
  return sweep.best;
}

int cmd_ingest(const RunConfig &cfg) {
  require_file(cfg.input, "--in");
  fs::path out = cfg.output.empty() ? fs::path(cfg.out_dir) / "normalized.csv" : fs::path(cfg.output);
  std::optional<fs::path> stats;
  if (cfg.output.empty()) stats = fs::path(cfg.out_dir) / "ingest_stats.json";
  run_stage("ingest", [&] { return stage_ingest(cfg, out, stats); });
  return kExitOk;
}

int cmd_score(const RunConfig &cfg) {
  require_file(cfg.input, "--in");
  Written w;
  run_stage("score", [&] { return stage_score(cfg, load_normalized(cfg.input), cfg.out_dir, w); });
  return kExitOk;
}

int cmd_balance(const RunConfig &cfg) {
  require_file(cfg.input, "--in");
  Written w;
  run_stage("balance", [&] { return stage_balance(cfg, load_edge_list(cfg.input), cfg.out_dir, w); });
  return kExitOk;
}

int cmd_coalitions(const RunConfig &cfg) {
  require_file(cfg.input, "--in");
  require_file(cfg.pairs, "--pairs");
  Written w;
  run_stage("coalitions", [&] { return stage_coalitions(cfg, load_edge_list(cfg.input), cfg.out_dir, w); });
  return kExitOk;
}

int cmd_evaluate(const RunConfig &cfg, bool write_files) {
  require_file(cfg.partition, "--partition");
  require_file(cfg.pairs, "--pairs");
  return run_stage("evaluate", [&] {
    const auto partition = load_partition_json(cfg.partition);
    const auto report = score_partition(partition.partition(), load_eval_set(cfg.pairs));
    if (write_files) {
      io::write_file_atomic(fs::path(cfg.out_dir) / "evaluation.csv", format_report_csv(report));
      io::write_file_atomic(fs::path(cfg.out_dir) / "evaluation.json", format_report_json(report));
    }
    std::cout << format_report_json(report);
    return kExitOk;
  });
}

int cmd_export(const RunConfig &cfg) {
  require_file(cfg.input, "--in");
  require_file(cfg.partition, "--partition");
  return run_stage("export", [&] {
    const auto g = load_edge_list(cfg.input);
    const auto partition = load_partition_json(cfg.partition);
    std::optional<std::vector<std::string>> subset;
    if (!cfg.subset.empty()) subset = split_list(cfg.subset);
    const fs::path out = cfg.output.empty() ? fs::path(cfg.out_dir) / "coalitions.dot" : fs::path(cfg.output);
    io::write_file_atomic(out, format_dot(g, partition.partition(), subset));
    spdlog::info("export: wrote {}", out.string());
    return kExitOk;
  });
}

json config_json(const RunConfig &cfg) {
  const auto coef = cfg.coefficient_set();
  json j;
  j["seed"] = cfg.seed;
  j["threshold_fraction"] = cfg.threshold_fraction;
  j["max_flips"] = cfg.max_flips ? json(*cfg.max_flips) : json(nullptr);
  j["max_rejections_per_draw"] = cfg.max_rejections;
  j["min_magnitude"] = cfg.min_magnitude;
  j["trace_every"] = cfg.trace_every;
  j["audit_every"] = cfg.audit_every;
  j["merge"] = cfg.merge;
  j["exchange_transform"] = cfg.exchange_transform;
  j["impute"] = cfg.impute;
  j["border_domain_max"] = cfg.border_domain_max ? json(*cfg.border_domain_max) : json(nullptr);
  j["coefficients"] = {{"e", coef.e}, {"i", coef.i}, {"r", coef.r}, {"d", coef.d}, {"w", coef.w},
                       {"b", coef.b}, {"c", coef.c}, {"p", coef.p}, {"x", coef.x}};
  return j;
}

json input_json(const std::string &path) {
  if (path.empty()) return nullptr;
  return {{"path", path}, {"sha256", io::sha256_file(path)}};
}

void apply_manifest(RunConfig &cfg) {
  const json m = json::parse(io::read_file(cfg.manifest), nullptr, false);
  if (m.is_discarded() || !m.contains("config") || !m.contains("inputs"))
    throw ValidationError("manifest " + cfg.manifest + " is not a pipeline manifest");
  try {
    const auto &c = m["config"];
    cfg.seed = c.at("seed").get<std::uint64_t>();
    cfg.threshold_fraction = c.at("threshold_fraction").get<double>();
    cfg.max_flips = c.at("max_flips").is_null() ? std::nullopt : std::optional(c["max_flips"].get<std::uint64_t>());
    cfg.max_rejections = c.at("max_rejections_per_draw").get<std::uint32_t>();
    cfg.min_magnitude = c.at("min_magnitude").get<double>();
    cfg.trace_every = c.at("trace_every").get<std::uint64_t>();
    cfg.audit_every = c.at("audit_every").get<std::uint64_t>();
    cfg.merge = c.at("merge").get<std::string>();
    cfg.exchange_transform = c.at("exchange_transform").get<std::string>();
    cfg.impute = c.at("impute").get<bool>();
    cfg.border_domain_max =
        c.at("border_domain_max").is_null() ? std::nullopt : std::optional(c["border_domain_max"].get<double>());

    const auto &in = m["inputs"];
    auto restore = [&](const char *key, std::string &slot) {
      if (!in.contains(key) || in[key].is_null()) {
        slot.clear();
        return;
      }
      slot = in[key].at("path").get<std::string>();
      require_file(slot, key);
      if (io::sha256_file(slot) != in[key].at("sha256").get<std::string>())
        throw ValidationError("input '" + slot + "' does not match the manifest digest");
    };
    restore("dataset", cfg.input);
    restore("pairs", cfg.pairs);
    restore("coefficients", cfg.coefficients);
  } catch (const json::exception &e) {
    throw ValidationError("manifest " + cfg.manifest + ": " + e.what());
  }
}

int cmd_pipeline(RunConfig cfg) {
  if (cfg.stage == "ingest") return cmd_ingest(cfg);
  if (cfg.stage == "score") return cmd_score(cfg);
  if (cfg.stage == "balance") return cmd_balance(cfg);
  if (cfg.stage == "coalitions") return cmd_coalitions(cfg);
  if (cfg.stage == "evaluate") return cmd_evaluate(cfg, true);
  if (cfg.stage == "export") return cmd_export(cfg);
  if (cfg.stage != "all") throw ValidationError("unknown stage '" + cfg.stage + "'");

  if (!cfg.manifest.empty()) apply_manifest(cfg);
  require_file(cfg.input, "--in");
  require_file(cfg.pairs, "--pairs");
  if (!cfg.coefficients.empty()) require_file(cfg.coefficients, "--coefficients");
  cfg.ingest_options();
  cfg.balance_config().validate();
  parse_merge_rule(cfg.merge);

  const fs::path dir = cfg.out_dir;
  Written written;
  auto normalized = run_stage("ingest", [&] {
    written.push_back("normalized.csv");
    written.push_back("ingest_stats.json");
    return stage_ingest(cfg, dir / "normalized.csv", dir / "ingest_stats.json");
  });
  auto graph = run_stage("score", [&] { return stage_score(cfg, normalized, dir, written); });
  auto balanced = run_stage("balance", [&] { return stage_balance(cfg, std::move(graph), dir, written); });
  run_stage("coalitions", [&] { return stage_coalitions(cfg, balanced, dir, written); });

  json manifest;
  manifest["tool"] = "balancer";
  manifest["format"] = 1;
  manifest["config"] = config_json(cfg);
  manifest["inputs"] = {{"dataset", input_json(cfg.input)},
                        {"pairs", input_json(cfg.pairs)},
                        {"coefficients", input_json(cfg.coefficients)}};
  json outputs;
  for (const auto &name : written) outputs[name] = io::sha256_file(dir / name);
  manifest["outputs"] = outputs;
  io::write_file_atomic(dir / "manifest.json", dump(manifest));
  spdlog::info("pipeline: wrote {} artifacts to {}", written.size() + 1, dir.string());
  return kExitOk;
}

void add_ingest_flags(CLI::App *cmd, RunConfig &cfg) {
  cmd->add_flag("--impute", cfg.impute, "Fill missing cells/directions with neutral values");
  cmd->add_option("--exchange-transform", cfg.exchange_transform, "ratio_minus_one | raw | log")
      ->check(CLI::IsMember({"ratio_minus_one", "raw", "log"}));
  cmd->add_option("--border-domain-max", cfg.border_domain_max,
                  "Border divisor when the observed maximum is not positive");
}

void add_score_flags(CLI::App *cmd, RunConfig &cfg) {
  cmd->add_option("--coefficients", cfg.coefficients, "Coefficient file (name = value lines)");
  cmd->add_option("--merge", cfg.merge, "mean | sum | min")->check(CLI::IsMember({"mean", "sum", "min"}));
}

void add_balance_flags(CLI::App *cmd, RunConfig &cfg) {
  cmd->add_option("--seed", cfg.seed, "PRNG seed");
  cmd->add_option("--threshold-fraction", cfg.threshold_fraction, "Stop at unstable/total <= this")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--max-flips", cfg.max_flips, "Flip budget (default 10*C(n,3))");
  cmd->add_option("--max-rejections", cfg.max_rejections, "Rejection draws before index fallback");
  cmd->add_option("--min-magnitude", cfg.min_magnitude, "Floor for positive-to-negative flip magnitude");
  cmd->add_option("--trace-every", cfg.trace_every, "Trace sampling interval (flips)")->check(CLI::PositiveNumber);
  cmd->add_option("--audit-every", cfg.audit_every, "Full-recount audit interval (0 = off)");
}

}  // namespace

int run_cli(int argc, const char *const *argv) {
  configure_logging();
  RunConfig cfg;
  CLI::App app{"Signed-network structural balance and coalition toolkit", "balancer"};
  app.require_subcommand(1);

  auto *ingest = app.add_subcommand("ingest", "Validate and normalize a raw factor dataset");
  ingest->add_option("--in", cfg.input, "Raw dataset CSV")->required();
  ingest->add_option("--out", cfg.output, "Normalized CSV path");
  ingest->add_option("--out-dir", cfg.out_dir, "Output directory when --out is not given");
  add_ingest_flags(ingest, cfg);

  auto *score = app.add_subcommand("score", "Score a normalized dataset into a signed edge list");
  score->add_option("--in", cfg.input, "Normalized CSV")->required();
  score->add_option("--out-dir", cfg.out_dir, "Output directory");
  add_score_flags(score, cfg);

  auto *balance = app.add_subcommand("balance", "Run the triangle-flip balancing dynamics");
  balance->add_option("--in", cfg.input, "Edge list CSV (a,b,weight)")->required();
  balance->add_option("--out-dir", cfg.out_dir, "Output directory");
  add_balance_flags(balance, cfg);

  auto *coalitions = app.add_subcommand("coalitions", "Extract coalitions from every start and keep the best");
  coalitions->add_option("--in", cfg.input, "Edge list CSV (a,b,weight)")->required();
  coalitions->add_option("--pairs", cfg.pairs, "Evaluation set CSV (a,b,relation)")->required();
  coalitions->add_option("--out-dir", cfg.out_dir, "Output directory");
  coalitions->add_option("--jobs", cfg.jobs, "Worker threads for the start sweep")->check(CLI::PositiveNumber);

  auto *evaluate = app.add_subcommand("evaluate", "Score a partition against known allies/enemies");
  evaluate->add_option("--partition", cfg.partition, "Partition JSON")->required();
  evaluate->add_option("--pairs", cfg.pairs, "Evaluation set CSV")->required();
  auto *eval_dir = evaluate->add_option("--out-dir", cfg.out_dir, "Write evaluation.csv/json here");

  auto *pipeline = app.add_subcommand("pipeline", "Run ingest, score, balance, coalitions and evaluate");
  pipeline->add_option("--in", cfg.input, "Raw dataset CSV (or the stage input with --stage)");
  pipeline->add_option("--pairs", cfg.pairs, "Evaluation set CSV");
  pipeline->add_option("--out-dir", cfg.out_dir, "Output directory");
  pipeline->add_option("--out", cfg.output, "Single-file output for --stage ingest/export");
  pipeline->add_option("--jobs", cfg.jobs, "Worker threads for the start sweep")->check(CLI::PositiveNumber);
  pipeline->add_option("--stage", cfg.stage, "all | ingest | score | balance | coalitions | evaluate | export");
  pipeline->add_option("--partition", cfg.partition, "Partition JSON for --stage evaluate/export");
  pipeline->add_option("--subset", cfg.subset, "Nation list for --stage export");
  pipeline->add_option("--manifest", cfg.manifest, "Replay the configuration and inputs of a previous run");
  add_ingest_flags(pipeline, cfg);
  add_score_flags(pipeline, cfg);
  add_balance_flags(pipeline, cfg);

  auto *exp = app.add_subcommand("export", "Write a DOT view of a partitioned graph");
  exp->add_option("--in,--edges", cfg.input, "Edge list CSV (a,b,weight)")->required();
  exp->add_option("--partition", cfg.partition, "Partition JSON")->required();
  exp->add_option("--out", cfg.output, "DOT output path");
  exp->add_option("--out-dir", cfg.out_dir, "Output directory when --out is not given");
  exp->add_option("--subset", cfg.subset, "Comma-separated nations to keep");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*ingest) return cmd_ingest(cfg);
    if (*score) return cmd_score(cfg);
    if (*balance) return cmd_balance(cfg);
    if (*coalitions) return cmd_coalitions(cfg);
    if (*evaluate) return cmd_evaluate(cfg, eval_dir->count() > 0);
    if (*pipeline) return cmd_pipeline(cfg);
    if (*exp) return cmd_export(cfg);
  } catch (const ValidationError &e) {
    spdlog::error("{}", e.what());
    return kExitInput;
  } catch (const InvariantViolation &e) {
    spdlog::critical("invariant violation: {}", e.what());
    return kExitInvariant;
  } catch (const std::logic_error &e) {
    spdlog::critical("internal error: {}", e.what());
    return kExitInvariant;
  } catch (const std::exception &e) {
    spdlog::error("{}", e.what());
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace balancer
