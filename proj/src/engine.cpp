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

#include "eqprove/engine.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace eqprove {

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kVirtualEpsilon = 1e-9;
// Applications between deadline polls.
constexpr std::size_t kApplyStride = 256;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

Deadline make_deadline(const EngineConfig& cfg) {
  return cfg.deterministic ? Deadline::virtual_clock(cfg.time_limit) : Deadline::wall(cfg.time_limit);
}

StopReason stop_of(StopKind k) {
  StopReason s;
  s.kind = k;
  return s;
}

}  // namespace

void EngineConfig::validate() const {
  if (!(time_limit > 0.0)) throw Error("time limit must be positive");
  if (pulse_threshold) {
    if (!(*pulse_threshold > 0.0)) throw Error("pulse threshold must be positive");
    if (*pulse_threshold > time_limit) throw Error("pulse threshold exceeds the time limit");
  }
  for (const Expr& g : goals) {
    if (g.op() != Op::Bool && g.op() != Op::Int) throw Error("goals must be literals");
  }
}

std::string StopReason::to_string() const {
  switch (kind) {
    case StopKind::Saturated: return "saturated";
    case StopKind::TimeLimit: return "time_limit";
    case StopKind::IterLimit: return "iter_limit";
    case StopKind::NodeLimit: return "node_limit";
    case StopKind::GoalFound: return "goal_found:" + std::to_string(goal_index);
    case StopKind::NonProvableDetected: return "non_provable:" + pattern_id;
  }
  return "?";
}

Deadline Deadline::wall(double seconds) {
  Deadline d;
  d.end_ = Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(seconds));
  return d;
}

Deadline Deadline::virtual_clock(double seconds) {
  Deadline d;
  d.virtual_now_ = std::make_shared<double>(0.0);
  d.virtual_end_ = seconds;
  return d;
}

bool Deadline::expired() const {
  if (virtual_now_) return *virtual_now_ + kVirtualEpsilon >= virtual_end_;
  return Clock::now() >= end_;
}

double Deadline::remaining() const {
  if (virtual_now_) return std::max(0.0, virtual_end_ - *virtual_now_);
  return std::max(0.0, std::chrono::duration<double>(end_ - Clock::now()).count());
}

Deadline Deadline::sub(double seconds) const {
  Deadline d = *this;
  if (virtual_now_) {
    d.virtual_end_ = std::min(virtual_end_, *virtual_now_ + seconds);
  } else {
    auto end = Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(seconds));
    d.end_ = std::min(end_, end);
  }
  return d;
}

void Deadline::tick() const {
  if (virtual_now_) *virtual_now_ += EngineConfig::kDeterministicQuantum;
}

std::optional<std::size_t> goals_check(const EGraph& g, EClassId root, std::span<const Expr> goals) {
  const EClassId r = g.find(root);
  for (std::size_t i = 0; i < goals.size(); ++i) {
    auto c = g.lookup_expr(goals[i]);
    if (c && g.find(*c) == r) return i;
  }
  return std::nullopt;
}

std::optional<std::string> nppd_check(const EGraph& g, EClassId root,
                                      std::span<const NPPattern> patterns) {
  for (const NPPattern& p : patterns) {
    for (const Match& m : ematch_class(g, p.pattern, root)) {
      if (p.cond.holds(g, m.subst)) return p.id;
    }
  }
  return std::nullopt;
}

SaturationRun run_saturation(EGraph& g, EClassId root, const Ruleset& rules,
                             std::span<const NPPattern> patterns, const EngineConfig& cfg,
                             const Deadline& deadline, std::size_t iter_budget,
                             std::size_t iteration_offset) {
  SaturationRun run;
  const auto start = Clock::now();
  g.rebuild();
  run.report.peak_enodes = g.num_nodes();

  auto finish = [&](StopReason s) {
    run.stop = std::move(s);
    return run;
  };

  if (cfg.ilc_enabled) {
    if (auto i = goals_check(g, root, cfg.goals)) {
      StopReason s = stop_of(StopKind::GoalFound);
      s.goal_index = *i;
      return finish(s);
    }
  }

  std::vector<std::vector<Match>> found(rules.size());
  for (;;) {
    if (run.iterations >= iter_budget) return finish(stop_of(StopKind::IterLimit));
    if (deadline.expired()) return finish(stop_of(StopKind::TimeLimit));

    const std::size_t nodes_before = g.num_nodes();
    const std::size_t unions_before = g.num_unions();
    const std::size_t ids_before = g.num_ids();

    // Match phase against the frozen graph.
    const auto match_start = Clock::now();
    MatchIndex index(g);
    bool timed_out = false;
    bool truncated = false;
    std::size_t matches = 0;
    for (auto& f : found) f.clear();
    const std::function<bool()> interrupt = [&] { return deadline.expired(); };
    for (std::size_t i = 0; i < rules.size() && !timed_out; ++i) {
      if (i > 0 && deadline.expired()) {
        timed_out = true;
        break;
      }
      if (matches >= cfg.match_limit) {
        truncated = true;
        break;
      }
      const Rule& r = rules.rules[i];
      timed_out = !search(g, index, r.lhs, found[i], cfg.match_limit - matches, interrupt);
      if (!r.cond.empty()) {
        std::erase_if(found[i], [&](const Match& m) { return !r.cond.holds(g, m.subst); });
      }
      matches += found[i].size();
    }

    // Apply phase.
    // Apply phase; matches left over at the deadline are dropped.
    const auto apply_start = Clock::now();
    bool node_limit_hit = false;
    bool apply_cut = false;
    std::size_t applied = 0;
    for (std::size_t i = 0; i < rules.size() && !node_limit_hit && !apply_cut; ++i) {
      for (const Match& m : found[i]) {
        if (++applied % kApplyStride == 0 && deadline.expired()) {
          apply_cut = true;
          break;
        }
        EClassId rhs = instantiate(g, rules.rules[i].rhs, m.subst);
        g.merge(rhs, m.eclass);
        if (nodes_before + (g.num_ids() - ids_before) > cfg.node_limit) {
          node_limit_hit = true;
          break;
        }
      }
    }
    timed_out = timed_out || apply_cut;
    const auto rebuild_start = Clock::now();
    g.rebuild();
    deadline.tick();
    ++run.iterations;

    IterationStats st;
    st.iteration = iteration_offset + run.iterations;
    st.matches = matches;
    st.unions = g.num_unions() - unions_before;
    st.classes = g.num_classes();
    st.enodes = g.num_nodes();
    st.elapsed_s = seconds_since(start);
    st.match_s = std::chrono::duration<double>(apply_start - match_start).count();
    st.apply_s = std::chrono::duration<double>(rebuild_start - apply_start).count();
    st.rebuild_s = seconds_since(rebuild_start);
    run.report.iterations.push_back(st);
    run.report.peak_enodes = std::max(run.report.peak_enodes, g.num_nodes());

    if (cfg.ilc_enabled) {
      if (auto i = goals_check(g, root, cfg.goals)) {
        StopReason s = stop_of(StopKind::GoalFound);
        s.goal_index = *i;
        return finish(s);
      }
    }
    if (cfg.nppd_enabled) {
      if (auto id = nppd_check(g, root, patterns)) {
        StopReason s = stop_of(StopKind::NonProvableDetected);
        s.pattern_id = *id;
        return finish(s);
      }
    }
    const bool changed = st.unions != 0 || g.num_nodes() != nodes_before;
    if (!changed && !timed_out && !truncated && !node_limit_hit) {
      return finish(stop_of(StopKind::Saturated));
    }
    if (node_limit_hit || g.num_nodes() > cfg.node_limit) return finish(stop_of(StopKind::NodeLimit));
    if (timed_out) return finish(stop_of(StopKind::TimeLimit));
  }
}

namespace {

void check_boolean(const Expr& expr) {
  if (sort_check(expr) != Sort::Bool) throw SortError("prove expects a boolean expression");
}

// Final goal check; a goal found here overrides the stop reason.
void finalize(ProveResult& res, const EGraph& g, EClassId root, const EngineConfig& cfg) {
  if (auto i = goals_check(g, root, cfg.goals)) {
    res.stop = stop_of(StopKind::GoalFound);
    res.stop.goal_index = *i;
  }
  switch (res.stop.kind) {
    case StopKind::GoalFound: {
      res.outcome = Outcome::Proved;
      const Expr& goal = cfg.goals[res.stop.goal_index];
      res.value = goal.op() == Op::Bool ? goal.bool_value() : goal.int_value() != 0;
      break;
    }
    case StopKind::NonProvableDetected:
      res.outcome = Outcome::NonProvable;
      res.pattern_id = res.stop.pattern_id;
      break;
    default:
      res.outcome = Outcome::Unknown;
      break;
  }
  res.classes = g.num_classes();
  res.enodes = g.num_nodes();
}

void append_report(RunReport& into, const RunReport& from) {
  into.iterations.insert(into.iterations.end(), from.iterations.begin(), from.iterations.end());
  into.peak_enodes = std::max(into.peak_enodes, from.peak_enodes);
}

}  // namespace

ProveResult prove(const Expr& expr, const Ruleset& rules, std::span<const NPPattern> patterns,
                  const EngineConfig& cfg) {
  check_boolean(expr);
  cfg.validate();
  const auto start = Clock::now();
  Deadline deadline = make_deadline(cfg);
  auto [g, root] = from_expr(expr);
  SaturationRun run = run_saturation(g, root, rules, patterns, cfg, deadline, cfg.iter_limit);

  ProveResult res;
  res.stop = run.stop;
  res.iterations = run.iterations;
  res.pulses = 1;
  res.report = std::move(run.report);
  finalize(res, g, root, cfg);
  res.elapsed_s = seconds_since(start);
  res.best_expr = extract_best(g, root).first;
  return res;
}

ProveResult prove_pulsed(const Expr& expr, const Ruleset& rules, std::span<const NPPattern> patterns,
                         const EngineConfig& cfg) {
  check_boolean(expr);
  cfg.validate();
  if (!cfg.pulse_threshold) throw Error("pulsed proving needs a pulse threshold");
  const double threshold = *cfg.pulse_threshold;
  const auto max_pulses = static_cast<std::size_t>(std::ceil(cfg.time_limit / threshold - 1e-9));

  const auto start = Clock::now();
  Deadline total = make_deadline(cfg);
  ProveResult res;
  Expr seed = expr;
  for (;;) {
    auto [g, root] = from_expr(seed);
    ++res.pulses;
    Deadline pulse = total.sub(threshold);
    SaturationRun run = run_saturation(g, root, rules, patterns, cfg, pulse,
                                       cfg.iter_limit - res.iterations, res.iterations);
    res.iterations += run.iterations;
    append_report(res.report, run.report);
    res.stop = run.stop;

    const bool pulse_expired = run.stop.kind == StopKind::TimeLimit;
    if (!pulse_expired || total.expired() || res.pulses >= max_pulses) {
      finalize(res, g, root, cfg);
      res.elapsed_s = seconds_since(start);
      res.best_expr = extract_best(g, root).first;
      return res;
    }
    seed = extract_best(g, root).first;
  }
}

ProveResult run_prover(const Expr& expr, const Ruleset& rules, std::span<const NPPattern> patterns,
                       const EngineConfig& cfg) {
  return cfg.pulse_threshold ? prove_pulsed(expr, rules, patterns, cfg)
                             : prove(expr, rules, patterns, cfg);
}

SimplifyResult simplify(const Expr& expr, const Ruleset& rules, const EngineConfig& cfg,
                        CostModel cm) {
  sort_check(expr);
  cfg.validate();
  EngineConfig c = cfg;
  c.ilc_enabled = false;
  c.nppd_enabled = false;
  Deadline deadline = make_deadline(c);
  auto [g, root] = from_expr(expr);
  SaturationRun run = run_saturation(g, root, rules, {}, c, deadline, c.iter_limit);
  auto [best, cost] = extract_best(g, root, cm);
  SimplifyResult res{std::move(best), cost, run.stop, run.iterations, g.num_classes(), g.num_nodes()};
  return res;
}

}  // namespace eqprove
