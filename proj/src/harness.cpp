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

#include "eqprove/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace eqprove {

std::string config_name(const EngineConfig& cfg) {
  const bool pulse = cfg.pulse_threshold.has_value();
  if (cfg.ilc_enabled && cfg.nppd_enabled && pulse) return "full";
  std::vector<std::string> on;
  if (cfg.ilc_enabled) on.push_back("ilc");
  if (cfg.nppd_enabled) on.push_back("nppd");
  if (pulse) on.push_back("pulse");
  if (on.empty()) return "vanilla";
  if (on.size() == 1) return on[0] + "-only";
  return on[0] + "+" + on[1];
}

std::string outcome_name(const ProveResult& r) {
  switch (r.outcome) {
    case Outcome::Proved: return r.value ? "proved_true" : "proved_false";
    case Outcome::NonProvable: return "non_provable";
    case Outcome::Unknown: return "unknown";
  }
  return "unknown";
}

std::vector<std::string> read_corpus(std::istream& in) {
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    auto e = line.find_last_not_of(" \t\r");
    out.push_back(line.substr(b, e - b + 1));
  }
  return out;
}

std::vector<std::string> read_corpus_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_corpus(in);
}

ReportRow prove_row(std::size_t id, const std::string& text, const Ruleset& rules,
                    std::span<const NPPattern> patterns, const EngineConfig& cfg) {
  ReportRow row;
  row.id = id;
  row.expression = text;
  Expr e = Expr::boolean(false);
  try {
    e = parse_infix(text);
    if (sort_check(e) != Sort::Bool) throw SortError("expression is not boolean");
  } catch (const SyntaxError& err) {
    row.outcome = "error";
    row.stop_reason = "syntax_error";
    row.error = err.what();
    return row;
  } catch (const SortError& err) {
    row.outcome = "error";
    row.stop_reason = "sort_error";
    row.error = err.what();
    return row;
  }
  ProveResult r = run_prover(e, rules, patterns, cfg);
  row.outcome = outcome_name(r);
  row.stop_reason = r.stop.to_string();
  row.time_ms = cfg.deterministic ? 0.0 : r.elapsed_s * 1000.0;
  row.iterations = r.iterations;
  row.pulses = r.pulses;
  row.classes = r.classes;
  row.enodes = r.enodes;
  if (r.outcome == Outcome::NonProvable) row.matched_pattern = r.pattern_id;
  if (r.best_expr) row.best_expr = print_infix(*r.best_expr);
  return row;
}

DatasetResult run_expressions(const std::vector<std::string>& exprs, const Ruleset& rules,
                              std::span<const NPPattern> patterns, const EngineConfig& cfg,
                              std::size_t jobs) {
  cfg.validate();
  DatasetResult result;
  result.rows.resize(exprs.size());
  jobs = std::max<std::size_t>(1, std::min(jobs, exprs.size()));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= exprs.size()) return;
      try {
        result.rows[i] = prove_row(i, exprs[i], rules, patterns, cfg);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(exprs.size());
        return;
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  result.summary = summarize(result.rows, config_name(cfg));
  return result;
}

DatasetResult run_dataset(const std::string& path, const Ruleset& rules,
                          std::span<const NPPattern> patterns, const EngineConfig& cfg,
                          std::size_t jobs) {
  return run_expressions(read_corpus_file(path), rules, patterns, cfg, jobs);
}

Summary summarize(const std::vector<ReportRow>& rows, const std::string& config) {
  Summary s;
  s.config = config;
  s.total = rows.size();
  std::vector<double> times;
  for (const ReportRow& r : rows) {
    if (r.outcome == "proved_true" || r.outcome == "proved_false") {
      ++s.proved;
      s.proved_time_s += r.time_ms / 1000.0;
    } else if (r.outcome == "non_provable") {
      ++s.non_provable;
    } else {
      ++s.unknown;
      if (r.outcome == "error") ++s.errors;
    }
    s.total_time_s += r.time_ms / 1000.0;
    times.push_back(r.time_ms);
  }
  if (!times.empty()) {
    std::sort(times.begin(), times.end());
    double sum = 0.0;
    for (double t : times) sum += t;
    s.mean_time_ms = sum / static_cast<double>(times.size());
    const std::size_t n = times.size();
    s.median_time_ms = n % 2 ? times[n / 2] : (times[n / 2 - 1] + times[n / 2]) / 2.0;
    // Nearest-rank percentile.
    auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(n)));
    s.p95_time_ms = times[std::max<std::size_t>(rank, 1) - 1];
  }
  return s;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string fixed3(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << v;
  return os.str();
}

nlohmann::ordered_json optional_json(const std::optional<std::string>& s) {
  return s ? nlohmann::ordered_json(*s) : nlohmann::ordered_json(nullptr);
}

}  // namespace

void emit_report(std::ostream& out, const DatasetResult& result, ReportFormat format) {
  if (format == ReportFormat::Csv) {
    out << kCsvHeader << '\n';
    for (const ReportRow& r : result.rows) {
      out << r.id << ',' << csv_field(r.expression) << ',' << r.outcome << ','
          << csv_field(r.stop_reason) << ',' << fixed3(r.time_ms) << ',' << r.iterations << ','
          << r.pulses << ',' << r.classes << ',' << r.enodes << ','
          << csv_field(r.matched_pattern.value_or("")) << ',' << csv_field(r.best_expr.value_or(""))
          << '\n';
    }
    return;
  }
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const ReportRow& r : result.rows) {
    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["expression"] = r.expression;
    j["outcome"] = r.outcome;
    j["stop_reason"] = r.stop_reason;
    j["time_ms"] = r.time_ms;
    j["iterations"] = r.iterations;
    j["pulses"] = r.pulses;
    j["classes"] = r.classes;
    j["enodes"] = r.enodes;
    j["matched_pattern"] = optional_json(r.matched_pattern);
    j["best_expr"] = optional_json(r.best_expr);
    if (r.error) j["error"] = *r.error;
    rows.push_back(std::move(j));
  }
  const Summary& s = result.summary;
  nlohmann::ordered_json sum;
  sum["config"] = s.config;
  sum["total"] = s.total;
  sum["proved"] = s.proved;
  sum["non_provable"] = s.non_provable;
  sum["unknown"] = s.unknown;
  sum["errors"] = s.errors;
  sum["total_time_s"] = s.total_time_s;
  sum["proved_time_s"] = s.proved_time_s;
  sum["mean_time_ms"] = s.mean_time_ms;
  sum["median_time_ms"] = s.median_time_ms;
  sum["p95_time_ms"] = s.p95_time_ms;
  nlohmann::ordered_json doc;
  doc["rows"] = std::move(rows);
  doc["summary"] = std::move(sum);
  out << doc.dump(2) << '\n';
}

void emit_report(const std::string& path, const DatasetResult& result, ReportFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  emit_report(out, result, format);
  if (!out) throw Error("write failed: " + path);
}

}  // namespace eqprove
