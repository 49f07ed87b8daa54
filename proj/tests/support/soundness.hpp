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

// Random ground-instance checks for rules and non-provable patterns.

#ifndef EQPROVE_TESTS_SOUNDNESS_HPP
#define EQPROVE_TESTS_SOUNDNESS_HPP

#include <random>
#include <string>
#include <vector>

#include "eqprove/engine.hpp"
#include "eqprove/rewrite.hpp"
#include "eqprove/ruleset.hpp"
#include "support/oracle.hpp"

namespace eqprove::soundness {

struct RuleReport {
  std::size_t applicable = 0;
  std::size_t counterexamples = 0;
  std::string first_counterexample;
};

inline Integer draw_int(std::mt19937_64& rng) {
  int tier = std::uniform_int_distribution<int>(0, 9)(rng);
  if (tier < 5) return Integer(std::uniform_int_distribution<int>(-10, 10)(rng));
  if (tier < 8) return Integer(std::uniform_int_distribution<int>(-100, 100)(rng));
  return Integer(std::uniform_int_distribution<int>(-100000, 100000)(rng));
}

/// Instantiates every variable of the rule with random constants. Instances
/// whose condition fails are skipped; the others must evaluate both sides to
/// the same value under the reference evaluator and the library evaluator.
inline RuleReport check_rule(const Rule& r, std::mt19937_64& rng, std::size_t trials) {
  RuleReport rep;
  std::vector<Sort> sorts = infer_var_sorts(r.lhs);
  std::vector<Value> values(sorts.size());
  for (std::size_t t = 0; t < trials; ++t) {
    for (std::size_t i = 0; i < sorts.size(); ++i) {
      if (sorts[i] == Sort::Bool) {
        values[i] = Value(std::uniform_int_distribution<int>(0, 1)(rng) == 1);
      } else {
        values[i] = Value(draw_int(rng));
      }
    }
    if (!r.cond.holds_on_values(values)) continue;
    Expr lhs = ground(r.lhs, values);
    Expr rhs = ground(r.rhs, values);
    oracle::RefValue ref_l;
    oracle::RefValue ref_r;
    try {
      ref_l = oracle::ref_eval(lhs, {});
      ref_r = oracle::ref_eval(rhs, {});
    } catch (const oracle::Overflow&) {
      continue;
    }
    ++rep.applicable;
    Value lib_l = evaluate(lhs, {});
    Value lib_r = evaluate(rhs, {});
    bool ok = ref_l == ref_r && lib_l == lib_r && oracle::to_ref(lib_l) == ref_l;
    if (!ok) {
      if (rep.counterexamples == 0) {
        rep.first_counterexample = print_infix(lhs) + "  vs  " + print_infix(rhs);
      }
      ++rep.counterexamples;
    }
  }
  return rep;
}

struct NppdReport {
  std::size_t fired = 0;
  /// Firing instances for which the random search found only one truth value.
  std::size_t decided = 0;
  std::string first_decided;
};

inline Expr instantiate_with(const PatternNode& p, const std::vector<Expr>& bind) {
  if (p.is_var) return bind[p.var];
  switch (p.op) {
    case Op::Var: return Expr::var(std::get<std::string>(p.leaf));
    case Op::Int: return Expr::integer(std::get<Integer>(p.leaf));
    case Op::Bool: return Expr::boolean(std::get<bool>(p.leaf));
    default: break;
  }
  std::vector<Expr> kids;
  for (const auto& c : p.children) kids.push_back(instantiate_with(c, bind));
  return Expr::make(p.op, std::move(kids));
}

/// Builds random instances of the pattern, keeps the ones the pattern flags
/// on a fresh graph, and searches assignments for both truth values.
inline NppdReport check_nppd(const NPPattern& p, std::mt19937_64& rng, std::size_t instances) {
  NppdReport rep;
  const std::size_t n = p.pattern.num_vars();
  std::vector<int> kind(n, 0);  // 0 free, 1 const, 2 variable, 3 non-constant
  for (const CondAtom& a : p.cond.atoms) {
    if (a.kind == CondAtom::Kind::IsConst) kind[a.var] = 1;
    if (a.kind == CondAtom::Kind::IsVar) kind[a.var] = 2;
    if (a.kind == CondAtom::Kind::NonConst) kind[a.var] = 3;
  }
  auto roll = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  std::vector<NPPattern> single = {p};
  for (std::size_t i = 0; i < instances; ++i) {
    std::vector<Expr> bind;
    for (std::size_t v = 0; v < n; ++v) {
      std::string name = "x" + std::to_string(v);
      int k = kind[v] == 0 ? (roll(0, 2) == 0 ? 2 : 1) : kind[v];
      switch (k) {
        case 1: bind.push_back(Expr::integer(Integer(roll(-9, 9)))); break;
        case 2: bind.push_back(Expr::var(name)); break;
        default:
          bind.push_back(roll(0, 1) ? Expr::var(name)
                                    : Expr::binary(Op::Add, Expr::binary(Op::Mul, Expr::var(name),
                                                                         Expr::integer(Integer(roll(2, 3)))),
                                                   Expr::var("w")));
      }
    }
    Expr e = instantiate_with(p.pattern.root, bind);
    auto [g, root] = from_expr(e);
    if (!nppd_check(g, root, single)) continue;
    ++rep.fired;
    bool seen[2] = {false, false};
    auto vars = free_vars(e);
    for (int t = 0; t < 4000 && !(seen[0] && seen[1]); ++t) {
      oracle::RefAssignment env;
      for (const auto& v : vars) env[v] = roll(-60, 60);
      seen[oracle::ref_eval(e, env).b ? 1 : 0] = true;
    }
    if (!(seen[0] && seen[1])) {
      if (rep.decided == 0) rep.first_decided = print_infix(e);
      ++rep.decided;
    }
  }
  return rep;
}

}  // namespace eqprove::soundness

#endif  // EQPROVE_TESTS_SOUNDNESS_HPP
