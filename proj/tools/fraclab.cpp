// fraclab run --config <file> [--suite S] [--out DIR] [--seed U64] [--grid N,L]
//
// Exit codes: 0 every criterion of the suite passed, 1 a criterion failed or
// the run aborted, 2 usage or configuration error (nothing is written).

#include "fraclab/experiment.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>

namespace {

using fraclab::ConfigError;

nlohmann::json read_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
}

std::pair<int, double> parse_grid(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw ConfigError("--grid expects N,L");
  try {
    std::size_t used = 0;
    const int points = std::stoi(text.substr(0, comma), &used);
    if (used != comma) throw ConfigError("--grid expects N,L");
    const std::string rest = text.substr(comma + 1);
    const double half_width = std::stod(rest, &used);
    if (used != rest.size()) throw ConfigError("--grid expects N,L");
    return {points, half_width};
  } catch (const std::logic_error&) {
    throw ConfigError("--grid expects N,L");
  }
}

struct RunArgs {
  std::string config;
  std::string suite;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string grid;
};

fraclab::ExperimentConfig build_config(const RunArgs& args) {
  std::optional<fraclab::Suite> suite;
  if (!args.suite.empty()) {
    suite = fraclab::parse_suite(args.suite);
    if (!suite) throw ConfigError("unknown suite '" + args.suite + "'");
  }
  nlohmann::json doc = nlohmann::json::object();
  if (!args.config.empty()) doc = read_document(args.config);
  if (args.config.empty() && !suite) throw ConfigError("either --config or --suite is required");
  auto cfg = fraclab::parse_config(doc, suite);

  if (!doc.contains("output_dir"))
    if (const char* env = std::getenv("FRACLAB_OUTPUT_DIR"); env && *env) cfg.output_dir = env;
  if (!args.out.empty()) cfg.output_dir = args.out;
  if (args.seed) {
    cfg.seed = *args.seed;
    if (cfg.family.kind == "random_bandlimited") cfg.family.seed = *args.seed;
  }
  if (!args.grid.empty()) std::tie(cfg.points, cfg.half_width) = parse_grid(args.grid);
  fraclab::validate(cfg);
  return cfg;
}

int run(const RunArgs& args) {
  fraclab::ExperimentConfig cfg;
  try {
    cfg = build_config(args);
  } catch (const ConfigError& e) {
    std::cerr << "fraclab: " << e.what() << '\n';
    return 2;
  }
  try {
    const auto start = std::chrono::steady_clock::now();
    const auto result = fraclab::run_suite(cfg);
    fraclab::emit_report(result, cfg.output_dir);
    for (const auto& c : result.criteria)
      std::cout << "AC" << c.id << (c.passed ? " PASS: " : " FAIL: ") << c.title << ": " << c.summary << '\n';
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << fraclab::suite_name(cfg.suite) << ": " << (result.passed() ? "pass" : "fail") << " in " << secs
              << " s, report in " << cfg.output_dir.string() << '\n';
    return result.passed() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "fraclab: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional-operator and Beltrami verification suites"};
  app.require_subcommand(1);
  RunArgs args;
  auto* cmd = app.add_subcommand("run", "Run one suite and write its report");
  cmd->add_option("--config", args.config, "JSON experiment config")->check(CLI::ExistingFile);
  cmd->add_option("--suite", args.suite,
                  "verify-operators, commutator-suite, solve, log-regularity, apriori-sweep or vmo-example");
  cmd->add_option("--out", args.out, "Output directory (default: config, then $FRACLAB_OUTPUT_DIR)");
  cmd->add_option("--seed", args.seed, "Seed for every random draw");
  cmd->add_option("--grid", args.grid, "Base grid as N,L");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  return run(args);
}
