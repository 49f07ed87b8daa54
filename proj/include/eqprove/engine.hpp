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

#ifndef EQPROVE_ENGINE_HPP
#define EQPROVE_ENGINE_HPP

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eqprove/egraph.hpp"
#include "eqprove/expr.hpp"
#include "eqprove/extract.hpp"
#include "eqprove/rewrite.hpp"
#include "eqprove/ruleset.hpp"

namespace eqprove {

struct EngineConfig {
  double time_limit = 3.0;
  std::size_t iter_limit = 10000;
  std::size_t node_limit = 1000000;
  bool ilc_enabled = true;
  bool nppd_enabled = true;
  std::optional<double> pulse_threshold = 0.05;
  std::vector<Expr> goals = {Expr::boolean(false), Expr::boolean(true)};
  /// Cap on the matches gathered per iteration across all rules.
  std::size_t match_limit = std::numeric_limits<std::size_t>::max();
  /// Replaces wall-clock stops by iteration budgets (one iteration counts
  /// as kDeterministicQuantum seconds).
  bool deterministic = false;

  static constexpr double kDeterministicQuantum = 0.01;

  /// Throws Error when a field is out of range.
  void validate() const;
};

enum class StopKind : std::uint8_t {
  Saturated,
  TimeLimit,
  IterLimit,
  NodeLimit,
  GoalFound,
  NonProvableDetected,
};

struct StopReason {
  StopKind kind = StopKind::Saturated;
  std::size_t goal_index = 0;
  std::string pattern_id;

  /// "saturated", "time_limit", "iter_limit", "node_limit", "goal_found:<i>"
  /// or "non_provable:<id>".
  std::string to_string() const;
};

enum class Outcome : std::uint8_t { Proved, NonProvable, Unknown };

struct IterationStats {
  std::size_t iteration = 0;
  std::size_t matches = 0;
  std::size_t unions = 0;
  std::size_t classes = 0;
  std::size_t enodes = 0;
  double elapsed_s = 0.0;
  double match_s = 0.0;
  double apply_s = 0.0;
  double rebuild_s = 0.0;
};

/// Per-iteration trace; one entry per iteration across all pulses.
struct RunReport {
  std::vector<IterationStats> iterations;
  std::size_t peak_enodes = 0;
};

struct ProveResult {
  Outcome outcome = Outcome::Unknown;
  /// Proved value; meaningful when outcome == Proved.
  bool value = false;
  /// Matched pattern; set when outcome == NonProvable.
  std::string pattern_id;
  StopReason stop;
  double elapsed_s = 0.0;
  std::size_t iterations = 0;
  /// Saturation runs performed (1 without pulsing).
  std::size_t pulses = 0;
  std::size_t classes = 0;
  std::size_t enodes = 0;
  std::optional<Expr> best_expr;
  RunReport report;
};

/// Shared budget across pulses: wall clock, or virtual seconds advanced by
/// whole iterations in deterministic mode.
class Deadline {
public:
  static Deadline wall(double seconds);
  static Deadline virtual_clock(double seconds);

  bool expired() const;
  double remaining() const;
  /// Sub-budget ending at min(now + seconds, this deadline). Virtual
  /// sub-budgets share the parent's clock.
  Deadline sub(double seconds) const;
  /// Advances a virtual clock by one iteration; no-op for wall deadlines.
  void tick() const;
  bool is_virtual() const { return virtual_now_ != nullptr; }

private:
  std::chrono::steady_clock::time_point end_{};
  std::shared_ptr<double> virtual_now_;
  double virtual_end_ = 0.0;
};

/// Index of the first goal literal present in the root class.
std::optional<std::size_t> goals_check(const EGraph& g, EClassId root, std::span<const Expr> goals);

/// Id of the first pattern matching the root class with its condition true.
std::optional<std::string> nppd_check(const EGraph& g, EClassId root,
                                      std::span<const NPPattern> patterns);

struct SaturationRun {
  StopReason stop;
  RunReport report;
  std::size_t iterations = 0;
};

/// Equality saturation with iteration-level goal and pattern checks.
/// `iteration_offset` numbers the trace when runs are chained.
SaturationRun run_saturation(EGraph& g, EClassId root, const Ruleset& rules,
                             std::span<const NPPattern> patterns, const EngineConfig& cfg,
                             const Deadline& deadline, std::size_t iter_budget,
                             std::size_t iteration_offset = 0);

/// Single saturation run followed by the final goal check. Ignores
/// cfg.pulse_threshold. Throws SortError unless `expr` is boolean.
ProveResult prove(const Expr& expr, const Ruleset& rules, std::span<const NPPattern> patterns,
                  const EngineConfig& cfg);

/// Pulsed proving: restarts saturation from the smallest extracted form each
/// time a pulse deadline passes. Requires cfg.pulse_threshold.
ProveResult prove_pulsed(const Expr& expr, const Ruleset& rules, std::span<const NPPattern> patterns,
                         const EngineConfig& cfg);

/// prove_pulsed when cfg.pulse_threshold is set, prove otherwise.
ProveResult run_prover(const Expr& expr, const Ruleset& rules, std::span<const NPPattern> patterns,
                       const EngineConfig& cfg);

struct SimplifyResult {
  Expr best;
  Cost cost = 0;
  StopReason stop;
  std::size_t iterations = 0;
  std::size_t classes = 0;
  std::size_t enodes = 0;
};

/// Saturates without goal or pattern checks and extracts the cheapest form.
SimplifyResult simplify(const Expr& expr, const Ruleset& rules, const EngineConfig& cfg,
                        CostModel cm = CostModel::AstSize);

}  // namespace eqprove

#endif  // EQPROVE_ENGINE_HPP
