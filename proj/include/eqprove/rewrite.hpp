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

#ifndef EQPROVE_REWRITE_HPP
#define EQPROVE_REWRITE_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "eqprove/egraph.hpp"
#include "eqprove/expr.hpp"
#include "eqprove/sexpr.hpp"

namespace eqprove {

/// Tree pattern: an expression whose leaves may also be pattern variables.
struct PatternNode {
  bool is_var = false;
  std::uint32_t var = 0;
  Op op = Op::Var;
  std::variant<std::monostate, std::string, Integer, bool> leaf;
  std::vector<PatternNode> children;
};

struct Pattern {
  PatternNode root;
  /// Variable names indexed by PatternNode::var. Shared between the two
  /// sides of a rule.
  std::vector<std::string> vars;

  std::size_t num_vars() const { return vars.size(); }
};

inline constexpr EClassId kUnbound = std::numeric_limits<EClassId>::max();

/// Maps pattern variable index to a canonical e-class.
using Substitution = std::vector<EClassId>;

struct Match {
  EClassId eclass;
  Substitution subst;
};

/// Arithmetic/boolean expression over matched constants, used by `pred`.
struct CondExpr {
  enum class Kind : std::uint8_t { Var, Lit, Apply, Abs };
  Kind kind = Kind::Lit;
  std::uint32_t var = 0;
  Value lit = Integer(0);
  Op op = Op::Add;
  std::vector<CondExpr> args;
};

struct CondAtom {
  enum class Kind : std::uint8_t { IsConst, NonConst, IsVar, NonZero, Pred };
  Kind kind = Kind::Pred;
  std::uint32_t var = 0;
  CondExpr pred;
};

/// Conjunction of atoms; empty means "always".
struct Condition {
  std::vector<CondAtom> atoms;

  bool empty() const { return atoms.empty(); }

  /// Decides the condition from class constant data. Never mutates `g`.
  bool holds(const EGraph& g, const Substitution& s) const;

  /// Value-level reading used by soundness checks: syntactic atoms (const,
  /// nonconst, isvar) are ignored, `nonzero` and `pred` are evaluated on
  /// `values` (indexed by pattern variable).
  bool holds_on_values(std::span<const Value> values) const;
};

struct Rule {
  std::string name;
  Pattern lhs;
  Pattern rhs;
  Condition cond;
};

/// Matches `p` against every canonical class of a rebuilt graph. Results are
/// ordered by class id, then by member e-node order.
std::vector<Match> ematch(const EGraph& g, const Pattern& p);

/// Matches `p` against a single class only.
std::vector<Match> ematch_class(const EGraph& g, const Pattern& p, EClassId eclass);

/// Per-operator lists of the classes that contain at least one e-node with
/// that operator. Built once per saturation iteration so that rules only
/// visit candidate classes.
class MatchIndex {
public:
  explicit MatchIndex(const EGraph& g);
  std::span<const EClassId> classes_with(Op op) const {
    return by_op_[static_cast<std::size_t>(op)];
  }
  std::span<const EClassId> all() const { return all_; }

private:
  std::array<std::vector<EClassId>, kNumOps> by_op_;
  std::vector<EClassId> all_;
};

/// Collects matches of `p` over the candidate classes in `index`, stopping
/// once `limit` matches have been found. `interrupt` is polled between
/// candidate classes; returns false if it cut the search short.
bool search(const EGraph& g, const MatchIndex& index, const Pattern& p, std::vector<Match>& out,
            std::size_t limit = std::numeric_limits<std::size_t>::max(),
            const std::function<bool()>& interrupt = {});

/// Adds the e-nodes of `p` under `s` and returns the resulting class.
EClassId instantiate(EGraph& g, const Pattern& p, const Substitution& s);

/// Applies one rule with snapshot semantics: every match (with its condition
/// checked) is gathered before any union. Returns the number of unions that
/// merged distinct classes. The graph is left un-rebuilt.
std::size_t apply_rule(EGraph& g, const Rule& r);

/// Ground instantiation of a pattern with concrete values per variable.
Expr ground(const Pattern& p, std::span<const Value> values);

/// Sort of every pattern variable, inferred from its positions.
std::vector<Sort> infer_var_sorts(const Pattern& p);
Sort pattern_sort(const Pattern& p, std::span<const Sort> var_sorts);

// Parsing / printing of patterns, conditions and rules. Pattern variables are
// written `?name`.

/// Parses a pattern, extending `vars` with new variable names when
/// `allow_new_vars` is set; otherwise unknown variables are an error.
PatternNode parse_pattern_node(const sexpr::Node& n, std::vector<std::string>& vars,
                               bool allow_new_vars);
Pattern parse_pattern(std::string_view text);
std::string print_pattern(const Pattern& p);

Condition parse_condition(std::span<const sexpr::Node> items, const std::vector<std::string>& vars);
std::string print_condition(const Condition& c, const std::vector<std::string>& vars);

/// Parses one `(rule <name> <lhs> <rhs> [:if <cond>...])` form and
/// sort-checks it.
Rule parse_rule(const sexpr::Node& n);
Rule parse_rule(std::string_view text);
std::string print_rule(const Rule& r);

void check_rule(const Rule& r);

}  // namespace eqprove

#endif  // EQPROVE_REWRITE_HPP
