// Copyright 2026 The eqprove Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// eqprove: prove or simplify integer/boolean expressions by equality
// saturation.

#include <cstdio>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "eqprove/engine.hpp"
#include "eqprove/harness.hpp"
#include "eqprove/ruleset.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitFatal = 3;

struct Options {
  std::string input;
  std::string expr;
  double timeout = 3.0;
  double pulse = 0.05;
  bool no_pulse = false;
  bool no_ilc = false;
  bool no_nppd = false;
  std::size_t iter_limit = 10000;
  std::size_t node_limit = 1000000;
  std::string rules_file;
  std::string nppd_file;
  std::string goals = "false,true";
  std::string report;
  std::string format = "csv";
  std::size_t jobs = 1;
  bool deterministic = false;
  bool trace = false;
  std::string cost = "ast-size";
};

std::vector<eqprove::Expr> parse_goals(const std::string& text) {
  std::vector<eqprove::Expr> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "true") {
      out.push_back(eqprove::Expr::boolean(true));
    } else if (item == "false") {
      out.push_back(eqprove::Expr::boolean(false));
    } else {
      throw CLI::ValidationError("--goals", "goals must be true or false, got '" + item + "'");
    }
  }
  return out;
}

eqprove::EngineConfig make_config(const Options& o) {
  eqprove::EngineConfig cfg;
  cfg.time_limit = o.timeout;
  cfg.iter_limit = o.iter_limit;
  cfg.node_limit = o.node_limit;
  cfg.ilc_enabled = !o.no_ilc;
  cfg.nppd_enabled = !o.no_nppd;
  cfg.pulse_threshold = o.no_pulse ? std::nullopt : std::optional<double>(o.pulse);
  cfg.goals = parse_goals(o.goals);
  cfg.deterministic = o.deterministic;
  cfg.validate();
  return cfg;
}

eqprove::Ruleset load_ruleset(const Options& o) {
  return o.rules_file.empty() ? eqprove::default_ruleset() : eqprove::load_rules(o.rules_file);
}

std::vector<eqprove::NPPattern> load_patterns(const Options& o) {
  return o.nppd_file.empty() ? eqprove::default_nppd_patterns() : eqprove::load_nppd(o.nppd_file);
}

void print_banner(const eqprove::Summary& s) {
  std::cerr << "config=" << s.config << " total=" << s.total << " proved=" << s.proved
            << " non_provable=" << s.non_provable << " unknown=" << s.unknown
            << " errors=" << s.errors << std::fixed << std::setprecision(3)
            << " total_time_s=" << s.total_time_s << " proved_time_s=" << s.proved_time_s
            << " mean_ms=" << s.mean_time_ms << " median_ms=" << s.median_time_ms
            << " p95_ms=" << s.p95_time_ms << '\n';
}

int run_prove(const Options& o) {
  eqprove::EngineConfig cfg = make_config(o);
  eqprove::Ruleset rules = load_ruleset(o);
  std::vector<eqprove::NPPattern> patterns = load_patterns(o);
  const auto format = o.format == "json" ? eqprove::ReportFormat::Json : eqprove::ReportFormat::Csv;

  if (!o.expr.empty()) {
    if (o.trace) {
      eqprove::ProveResult r = eqprove::run_prover(eqprove::parse_infix(o.expr), rules, patterns, cfg);
      for (const eqprove::IterationStats& st : r.report.iterations) {
        std::cerr << "iter=" << st.iteration << " matches=" << st.matches << " unions=" << st.unions
                  << " classes=" << st.classes << " enodes=" << st.enodes << std::fixed
                  << std::setprecision(3) << " t=" << st.elapsed_s << " match=" << st.match_s
                  << " apply=" << st.apply_s << " rebuild=" << st.rebuild_s << '\n';
      }
    }
    eqprove::ReportRow row = eqprove::prove_row(0, o.expr, rules, patterns, cfg);
    if (row.outcome == "error") {
      std::cerr << "eqprove: " << row.error.value_or(row.stop_reason) << '\n';
      return kExitUsage;
    }
    std::cout << row.outcome << '\n';
    std::cerr << "stop=" << row.stop_reason << " iterations=" << row.iterations
              << " pulses=" << row.pulses << " classes=" << row.classes << " enodes=" << row.enodes
              << std::fixed << std::setprecision(3) << " time_ms=" << row.time_ms;
    if (row.matched_pattern) std::cerr << " pattern=" << *row.matched_pattern;
    if (row.best_expr) std::cerr << " best=" << *row.best_expr;
    std::cerr << '\n';
    if (!o.report.empty()) {
      eqprove::DatasetResult result;
      result.rows.push_back(row);
      result.summary = eqprove::summarize(result.rows, eqprove::config_name(cfg));
      eqprove::emit_report(o.report, result, format);
    }
    return 0;
  }

  eqprove::DatasetResult result = eqprove::run_dataset(o.input, rules, patterns, cfg, o.jobs);
  if (o.report.empty() || o.report == "-") {
    eqprove::emit_report(std::cout, result, format);
  } else {
    eqprove::emit_report(o.report, result, format);
  }
  print_banner(result.summary);
  return 0;
}

int run_simplify(const Options& o) {
  eqprove::EngineConfig cfg;
  cfg.time_limit = o.timeout;
  cfg.iter_limit = o.iter_limit;
  cfg.node_limit = o.node_limit;
  cfg.pulse_threshold.reset();
  cfg.deterministic = o.deterministic;
  cfg.validate();
  eqprove::Ruleset rules = load_ruleset(o);
  const auto cm = o.cost == "ast-depth" ? eqprove::CostModel::AstDepth : eqprove::CostModel::AstSize;
  eqprove::SimplifyResult r = eqprove::simplify(eqprove::parse_infix(o.expr), rules, cfg, cm);
  std::cout << eqprove::print_infix(r.best) << '\n';
  std::cerr << "stop=" << r.stop.to_string() << " iterations=" << r.iterations
            << " cost=" << r.cost << " classes=" << r.classes << " enodes=" << r.enodes << '\n';
  return 0;
}

void add_engine_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--timeout", o.timeout, "Time limit in seconds")->check(CLI::PositiveNumber);
  cmd->add_option("--iter-limit", o.iter_limit, "Iteration limit");
  cmd->add_option("--node-limit", o.node_limit, "E-node limit");
  cmd->add_option("--rules", o.rules_file, "Rule file replacing the built-in ruleset")
      ->check(CLI::ExistingFile);
  cmd->add_flag("--deterministic", o.deterministic, "Use iteration budgets instead of wall time");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prove or simplify integer/boolean expressions by equality saturation"};
  app.require_subcommand(1);
  Options o;

  CLI::App* prove = app.add_subcommand("prove", "Prove expressions true or false");
  auto* input = prove->add_option("--input", o.input, "Corpus file, one expression per line")
                    ->check(CLI::ExistingFile);
  auto* expr = prove->add_option("--expr", o.expr, "Single expression");
  input->excludes(expr);
  add_engine_flags(prove, o);
  auto* pulse = prove->add_option("--pulse", o.pulse, "Pulse threshold in seconds")
                    ->check(CLI::PositiveNumber);
  auto* no_pulse = prove->add_flag("--no-pulse", o.no_pulse, "Disable pulsing");
  pulse->excludes(no_pulse);
  prove->add_flag("--no-ilc", o.no_ilc, "Disable the iteration-level goal check");
  prove->add_flag("--no-nppd", o.no_nppd, "Disable non-provable pattern detection");
  prove->add_option("--nppd-file", o.nppd_file, "Pattern file replacing the built-in patterns")
      ->check(CLI::ExistingFile);
  prove->add_flag("--trace", o.trace, "Print per-iteration statistics for --expr");
  prove->add_option("--goals", o.goals, "Comma-separated goal literals");
  prove->add_option("--report", o.report, "Report path (default: stdout)");
  prove->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
  prove->add_option("--jobs", o.jobs, "Parallel workers")->check(CLI::PositiveNumber);

  CLI::App* simplify = app.add_subcommand("simplify", "Print the cheapest equivalent form");
  simplify->add_option("--expr", o.expr, "Expression")->required();
  simplify->add_option("--cost", o.cost, "Cost model")
      ->check(CLI::IsMember({"ast-size", "ast-depth"}));
  add_engine_flags(simplify, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (prove->parsed()) {
      if (o.input.empty() && o.expr.empty()) {
        std::cerr << "eqprove: prove needs --input or --expr\n";
        return kExitUsage;
      }
      return run_prove(o);
    }
    return run_simplify(o);
  } catch (const eqprove::ConstantContradiction& e) {
    std::cerr << "eqprove: fatal: " << e.what() << '\n';
    return kExitFatal;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "eqprove: " << e.what() << '\n';
    return kExitUsage;
  } catch (const eqprove::Error& e) {
    std::cerr << "eqprove: " << e.what() << '\n';
    return kExitUsage;
  }
}
