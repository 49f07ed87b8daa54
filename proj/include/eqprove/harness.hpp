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

#ifndef EQPROVE_HARNESS_HPP
#define EQPROVE_HARNESS_HPP

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eqprove/engine.hpp"

namespace eqprove {

struct ReportRow {
  std::size_t id = 0;
  std::string expression;
  /// proved_true, proved_false, non_provable, unknown or error.
  std::string outcome;
  std::string stop_reason;
  double time_ms = 0.0;
  std::size_t iterations = 0;
  std::size_t pulses = 0;
  std::size_t classes = 0;
  std::size_t enodes = 0;
  std::optional<std::string> matched_pattern;
  std::optional<std::string> best_expr;
  /// Diagnostic for error rows (JSON only).
  std::optional<std::string> error;
};

struct Summary {
  std::string config;
  std::size_t total = 0;
  std::size_t proved = 0;
  std::size_t non_provable = 0;
  /// Includes error rows.
  std::size_t unknown = 0;
  std::size_t errors = 0;
  double total_time_s = 0.0;
  double proved_time_s = 0.0;
  double mean_time_ms = 0.0;
  double median_time_ms = 0.0;
  double p95_time_ms = 0.0;
};

struct DatasetResult {
  std::vector<ReportRow> rows;
  Summary summary;
};

enum class ReportFormat { Csv, Json };

inline constexpr const char* kCsvHeader =
    "id,expression,outcome,stop_reason,time_ms,iterations,pulses,classes,enodes,matched_pattern,"
    "best_expr";

/// vanilla, ilc-only, nppd-only, pulse-only, full, or a '+'-joined mix.
std::string config_name(const EngineConfig& cfg);

std::string outcome_name(const ProveResult& r);

/// Non-blank lines of a corpus with `#` comment lines removed.
std::vector<std::string> read_corpus(std::istream& in);
std::vector<std::string> read_corpus_file(const std::string& path);

/// Proves one expression with a fresh engine. Parse and sort errors become
/// an error row; engine contradictions propagate.
ReportRow prove_row(std::size_t id, const std::string& text, const Ruleset& rules,
                    std::span<const NPPattern> patterns, const EngineConfig& cfg);

/// Proves every expression, `jobs` at a time; rows keep input order.
DatasetResult run_expressions(const std::vector<std::string>& exprs, const Ruleset& rules,
                              std::span<const NPPattern> patterns, const EngineConfig& cfg,
                              std::size_t jobs = 1);
DatasetResult run_dataset(const std::string& path, const Ruleset& rules,
                          std::span<const NPPattern> patterns, const EngineConfig& cfg,
                          std::size_t jobs = 1);

Summary summarize(const std::vector<ReportRow>& rows, const std::string& config);

void emit_report(std::ostream& out, const DatasetResult& result, ReportFormat format);
void emit_report(const std::string& path, const DatasetResult& result, ReportFormat format);

}  // namespace eqprove

#endif  // EQPROVE_HARNESS_HPP
