#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "bpbr/error.hpp"
#include "bpbr/estimator.hpp"
#include "bpbr/inference.hpp"
#include "bpbr/io.hpp"
#include "bpbr/simulation.hpp"
#include "bpbr/variance.hpp"

namespace bpbr::cli {

namespace {

struct Config {
  std::string input_path;
  std::string output_path;
  std::string config_path;
  std::string plot_path;
  std::string mode = "block";
  std::string variance = "conservative";
  std::string format = "json";
  double gamma = 0.05;
  double tie_tolerance = 0.0;
  std::uint64_t seed = 42;
  std::size_t replicates = 2000;
  unsigned threads = 0;
  bool seed_set = false;
  bool replicates_set = false;
};

std::filesystem::path resolve_output(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') {
      return std::filesystem::path(dir) / p;
    }
  }
  return p;
}

void emit(const std::string& text, const Config& cfg, std::ostream& out) {
  if (cfg.output_path.empty()) {
    out << text;
    return;
  }
  const auto path = resolve_output(cfg.output_path);
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::ParseError, "cannot write " + path.string());
  file << text;
}

void require_input(const std::string& path) {
  if (path.empty()) throw Error(ErrorCode::ParseError, "no input file given");
  if (!std::filesystem::is_regular_file(path)) {
    throw Error(ErrorCode::ParseError, "input file not found: " + path);
  }
}

void validate(const Config& cfg) {
  if (!(cfg.gamma > 0.0 && cfg.gamma < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "--gamma must lie in (0,1)");
  }
  if (cfg.format != "json" && cfg.format != "text") {
    throw Error(ErrorCode::InvalidArgument, "--format must be json or text");
  }
  if (!cfg.output_path.empty()) {
    const auto parent = resolve_output(cfg.output_path).parent_path();
    if (!parent.empty() && !std::filesystem::is_directory(parent)) {
      throw Error(ErrorCode::InvalidArgument, "output directory missing: " + parent.string());
    }
  }
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

int cmd_fit(const Config& cfg, bool test_only, std::ostream& out) {
  require_input(cfg.input_path);
  const GroupedDataset ds = io::read_csv_file(cfg.input_path);
  const SlopeOptions options{cfg.tie_tolerance, -1.0};
  const FitResult r = equivalence_test(ds, parse_mode(cfg.mode), cfg.gamma,
                                       parse_variance_source(cfg.variance), options);
  if (cfg.format == "json") {
    nlohmann::json j = io::to_json(r);
    if (test_only) {
      j = {{"verdict", verdict_name(r.verdict)},
           {"equivalent", r.verdict == Verdict::Equivalent},
           {"slope_contains_one", r.beta_ci.contains(1.0)},
           {"intercept_contains_zero", r.alpha_ci.contains(0.0)},
           {"fit", std::move(j)}};
    }
    emit(dump(j), cfg, out);
  } else {
    std::string text = io::format_fit_text(r);
    if (test_only) {
      text += fmt::format("1 in slope interval      {}\n0 in intercept interval  {}\n",
                          r.beta_ci.contains(1.0) ? "yes" : "no",
                          r.alpha_ci.contains(0.0) ? "yes" : "no");
    }
    emit(text, cfg, out);
  }
  return kOk;
}

int cmd_simulate(const Config& cfg, std::ostream& out) {
  if (cfg.config_path.empty()) throw Error(ErrorCode::ParseError, "--config is required");
  if (!std::filesystem::is_regular_file(cfg.config_path)) {
    throw Error(ErrorCode::ParseError, "config file not found: " + cfg.config_path);
  }
  std::ifstream in(cfg.config_path);
  Scenario sc = io::parse_scenario(in);
  if (cfg.seed_set) sc.seed = cfg.seed;
  if (cfg.replicates_set) sc.replicates = cfg.replicates;

  const SimSummary summary = run_scenario(sc, {cfg.threads});
  emit(cfg.format == "json" ? dump(io::to_json(summary)) : io::format_summary_text(summary),
       cfg, out);

  if (!cfg.plot_path.empty()) {
    const GroupedDataset ds = generate_dataset(sc, 0);
    std::vector<io::PlotLine> lines{{"true", sc.alpha, sc.beta}};
    for (RegressionMode mode : {RegressionMode::Block, RegressionMode::Classic}) {
      try {
        const PointEstimate est = fit(ds, mode);
        lines.push_back({std::string(mode_name(mode)), est.alpha_hat, est.beta_hat});
      } catch (const Error&) {
        // A mode that cannot fit replicate 0 (e.g. block on one group) is omitted.
      }
    }
    const auto path = resolve_output(cfg.plot_path);
    std::ofstream file(path, std::ios::binary);
    if (!file) throw Error(ErrorCode::ParseError, "cannot write " + path.string());
    io::write_plot_data(file, ds, lines);
  }
  return kOk;
}

int cmd_table1(const Config& cfg, std::ostream& out) {
  const auto rows = table1_suite(cfg.replicates, cfg.seed, {cfg.threads});
  if (cfg.format == "json") {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& row : rows) j.push_back(io::to_json(row));
    emit(dump(j), cfg, out);
  } else {
    emit(io::format_table1_text(rows), cfg, out);
  }
  return kOk;
}

int cmd_diagnose(const Config& cfg, std::ostream& out) {
  require_input(cfg.input_path);
  const GroupedDataset ds = io::read_csv_file(cfg.input_path);
  const auto& p = ds.group_sizes();
  const OverlapReport overlap = check_overlap(ds);
  const QMatrix q = estimate_q_empirical(ds);

  nlohmann::json models = nlohmann::json::object();
  if (ds.size() >= 2) models["classic-ungrouped"] = variance_classic(ds.size());
  models["non-overlapping"] = variance_nonoverlapping(p);
  nlohmann::json asym = nullptr;
  try {
    models["exact-with-q"] = variance_exact(p, q);
    const AsymptoticDiagnostic d = asymptotic_diagnostic(p, q);
    asym = {{"l_m", d.l_m},
            {"l_o", d.l_o},
            {"stated", d.stated},
            {"with_factor_two", d.with_factor_two},
            {"exact", d.exact}};
  } catch (const Error& e) {
    models["exact-with-q"] = std::string(e.name());
  }
  if (std::all_of(p.begin(), p.end(), [&](std::size_t v) { return v == p.front(); })) {
    models["equal-groups"] = variance_equal_groups(p.size(), p.front(), q.off_diagonal_sum());
    models["equal-groups-non-overlapping"] = variance_equal_groups(p.size(), p.front(), 0.0);
  }
  nlohmann::json j{{"n", ds.size()},
                   {"m", ds.group_count()},
                   {"group_sizes", p},
                   {"labels", ds.labels()},
                   {"overlap", io::to_json(overlap, ds)},
                   {"q", io::to_json(q)},
                   {"variance", models},
                   {"asymptotic", asym}};
  if (cfg.format == "json") {
    emit(dump(j), cfg, out);
  } else {
    std::string text = fmt::format("n={} m={}\nnon-overlapping x: {}  y: {}\n", ds.size(),
                                   ds.group_count(), overlap.nonoverlapping_x ? "yes" : "no",
                                   overlap.nonoverlapping_y ? "yes" : "no");
    for (const auto& [name, value] : models.items()) {
      text += fmt::format("variance {:<30} {}\n", name, value.dump());
    }
    emit(text, cfg, out);
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Block-Passing-Bablok regression for repeated-measurement method comparison"};
  app.require_subcommand(1);
  Config cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-o,--output", cfg.output_path, "Output file (default stdout)");
    sub->add_option("--format", cfg.format, "json or text")->capture_default_str();
  };
  auto add_fit_options = [&](CLI::App* sub) {
    sub->add_option("input", cfg.input_path, "CSV with header x,y,group")->required();
    sub->add_option("--mode", cfg.mode, "block, classic or theil-sen")->capture_default_str();
    sub->add_option("--gamma", cfg.gamma, "Error probability of the intervals")
        ->capture_default_str();
    sub->add_option("--variance", cfg.variance, "conservative or empirical-q")
        ->capture_default_str();
    sub->add_option("--tie-tolerance", cfg.tie_tolerance,
                    "Absolute tolerance for tie and offset comparisons")
        ->capture_default_str();
    add_common(sub);
  };
  auto add_sim_options = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
    sub->add_option("--replicates", cfg.replicates, "Monte Carlo replicates")
        ->capture_default_str();
    sub->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");
    add_common(sub);
  };

  CLI::App* fit_cmd = app.add_subcommand("fit", "Fit and report estimates with intervals");
  add_fit_options(fit_cmd);
  CLI::App* test_cmd = app.add_subcommand("test", "Two-method equivalence test");
  add_fit_options(test_cmd);
  CLI::App* sim_cmd = app.add_subcommand("simulate", "Run one scenario file");
  sim_cmd->add_option("--config", cfg.config_path, "Scenario file (key = value)")->required();
  sim_cmd->add_option("--emit-plot-data", cfg.plot_path,
                      "Write replicate 0 points and fitted lines as CSV text");
  add_sim_options(sim_cmd);
  CLI::App* table_cmd = app.add_subcommand("table1", "Run the full 32-cell simulation grid");
  add_sim_options(table_cmd);
  CLI::App* diag_cmd = app.add_subcommand("diagnose", "Overlap, q matrix and variance models");
  diag_cmd->add_option("input", cfg.input_path, "CSV with header x,y,group")->required();
  add_common(diag_cmd);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  cfg.seed_set = sim_cmd->count("--seed") > 0;
  cfg.replicates_set = sim_cmd->count("--replicates") > 0;

  try {
    validate(cfg);
    if (*fit_cmd) return cmd_fit(cfg, false, out);
    if (*test_cmd) return cmd_fit(cfg, true, out);
    if (*sim_cmd) return cmd_simulate(cfg, out);
    if (*table_cmd) return cmd_table1(cfg, out);
    if (*diag_cmd) return cmd_diagnose(cfg, out);
  } catch (const Error& e) {
    err << e.what() << "\n";
    if (e.code() == ErrorCode::AllReplicatesFailed) return kAllReplicatesFailed;
    return is_data_error(e.code()) ? kDataError : kStatisticalError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsage;
}

}  // namespace bpbr::cli
