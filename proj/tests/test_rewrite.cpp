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

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "eqprove/engine.hpp"
#include "eqprove/extract.hpp"
#include "eqprove/rewrite.hpp"
#include "eqprove/ruleset.hpp"
#include "support/oracle.hpp"

using namespace eqprove;

namespace {

std::set<std::pair<EClassId, Substitution>> as_set(const std::vector<Match>& ms) {
  std::set<std::pair<EClassId, Substitution>> out;
  for (const Match& m : ms) out.emplace(m.eclass, m.subst);
  return out;
}

std::string random_pattern(std::mt19937_64& rng, int depth) {
  auto roll = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  if (depth == 0 || roll(3) == 0) {
    switch (roll(5)) {
      case 0: return "?x";
      case 1: return "?y";
      case 2: return "a";
      case 3: return std::to_string(roll(3));
      default: return "?z";
    }
  }
  static const char* kOps[] = {"+", "*", "-"};
  if (roll(5) == 0) return "(- " + random_pattern(rng, depth - 1) + ")";
  return std::string("(") + kOps[roll(3)] + " " + random_pattern(rng, depth - 1) + " " +
         random_pattern(rng, depth - 1) + ")";
}

/// Small graph built from a few random expressions with a few sound-looking
/// but arbitrary unions between non-constant classes.
EGraph random_graph(std::mt19937_64& rng) {
  oracle::ExprGen gen{rng};
  gen.vars = {"a", "b"};
  gen.const_lo = 0;
  gen.const_hi = 2;
  gen.allow_div = false;
  EGraph g;
  std::vector<EClassId> roots;
  while (g.num_ids() < 14) roots.push_back(g.add_expr(gen.int_expr(3)));
  g.rebuild();
  int k = std::uniform_int_distribution<int>(0, 2)(rng);
  for (int i = 0; i < k; ++i) {
    auto x = roots[std::uniform_int_distribution<std::size_t>(0, roots.size() - 1)(rng)];
    auto y = roots[std::uniform_int_distribution<std::size_t>(0, roots.size() - 1)(rng)];
    if (g.data(x) || g.data(y)) continue;
    g.merge(x, y);
  }
  g.rebuild();
  return g;
}

}  // namespace

TEST_CASE("pattern parse and print") {
  Pattern p = parse_pattern("(* ?x (+ ?y 2))");
  CHECK(p.num_vars() == 2);
  CHECK(print_pattern(p) == "(* ?x (+ ?y 2))");
  CHECK(print_pattern(parse_pattern("?x")) == "?x");
  CHECK_THROWS_AS(parse_pattern("(* ?x)"), SyntaxError);
}

TEST_CASE("ematch on the (a*2)/2 graph") {
  auto [g, root] = from_expr(parse_infix("(a*2)/2"));
  auto ms = ematch(g, parse_pattern("(* ?x 2)"));
  REQUIRE(ms.size() == 1);
  EClassId a = *g.lookup_expr(Expr::var("a"));
  CHECK(ms[0].subst[0] == a);
  CHECK(ematch(g, parse_pattern("?x")).size() == g.num_classes());
  CHECK(ematch_class(g, parse_pattern("(/ ?x ?y)"), root).size() == 1);
  CHECK(ematch_class(g, parse_pattern("(/ ?x ?y)"), a).empty());
}

TEST_CASE("nonlinear patterns bind by class equality") {
  auto [g, root] = from_expr(parse_infix("(a + b) - (a + b)"));
  CHECK(ematch(g, parse_pattern("(- ?x ?x)")).size() == 1);
  auto [h, r2] = from_expr(parse_infix("(a + b) - (b + a)"));
  CHECK(ematch(h, parse_pattern("(- ?x ?x)")).empty());
}

TEST_CASE("ematch agrees with brute-force enumeration") {
  std::mt19937_64 rng(71);
  std::size_t nonempty = 0;
  for (int round = 0; round < 300; ++round) {
    EGraph g = random_graph(rng);
    Pattern p = parse_pattern(random_pattern(rng, 2));
    auto got = as_set(ematch(g, p));
    auto want = oracle::brute_ematch(g, p);
    REQUIRE(got == want);
    MatchIndex index(g);
    std::vector<Match> via_index;
    CHECK(search(g, index, p, via_index));
    REQUIRE(as_set(via_index) == want);
    nonempty += want.empty() ? 0 : 1;
  }
  CHECK(nonempty > 100);
}

TEST_CASE("instantiate") {
  auto [g, root] = from_expr(parse_infix("(a*2)/2"));
  Pattern p = parse_pattern("?x");
  CHECK(instantiate(g, p, {root}) == root);

  Rule r = parse_rule("(rule r (/ (* ?x ?y) ?z) (* ?x (/ ?y ?z)))");
  auto ms = ematch(g, r.lhs);
  REQUIRE(ms.size() == 1);
  std::size_t before = g.num_ids();
  EClassId c = instantiate(g, r.rhs, ms[0].subst);
  CHECK(g.num_ids() - before <= 2);
  g.rebuild();
  auto terms = oracle::terms_upto(g, c, 3);
  CHECK(terms.count(parse_infix("a * (2 / 2)")) == 1);
}

TEST_CASE("apply_rule with x*1 -> x") {
  auto [g, root] = from_expr(parse_infix("a * 1"));
  Rule r = parse_rule("(rule mul-one (* ?x 1) ?x)");
  CHECK(apply_rule(g, r) == 1);
  g.rebuild();
  CHECK(extract_best(g, root).first == Expr::var("a"));
  CHECK(apply_rule(g, r) == 0);
}

TEST_CASE("worked example reaches a fixpoint with the term equal to a") {
  Ruleset rs = load_rules(EQPROVE_SOURCE_DIR "/tests/data/worked_example.rules");
  REQUIRE(rs.size() == 3);
  auto [g, root] = from_expr(parse_infix("(a*2)/2"));
  std::size_t rounds = 0;
  for (;; ++rounds) {
    std::size_t unions = 0;
    std::size_t ids = g.num_ids();
    for (const Rule& r : rs.rules) unions += apply_rule(g, r);
    g.rebuild();
    if (unions == 0 && g.num_ids() == ids) break;
    REQUIRE(rounds < 10);
  }
  CHECK(rounds <= 4);
  CHECK(g.find(root) == g.find(*g.lookup_expr(Expr::var("a"))));
  CHECK(extract_best(g, root) == std::make_pair(Expr::var("a"), Cost{1}));
}

TEST_CASE("conditional rule does not fire on a zero class") {
  Rule r = parse_rule("(rule div-self (/ ?x ?x) 1 :if (nonzero ?x))");
  auto [g, root] = from_expr(parse_infix("0 / 0"));
  REQUIRE(!ematch(g, r.lhs).empty());
  CHECK(apply_rule(g, r) == 0);
  g.rebuild();
  CHECK(*g.data(root) == Value(Integer(0)));
  CHECK(oracle::ref_div(0, 0) == 0);

  auto [h, r2] = from_expr(parse_infix("3 / 3"));
  CHECK(apply_rule(h, r) == 0);
  CHECK(*h.data(r2) == Value(Integer(1)));

  auto [k, r3] = from_expr(parse_infix("y / y"));
  CHECK(apply_rule(k, r) == 0);
}

TEST_CASE("conditions decide from constant data only") {
  Rule r = parse_rule("(rule t (< ?c (% ?a ?b)) false :if (const ?c) (nonconst ?a) "
                      "(pred (<= (abs ?b) ?c)))");
  auto [g, root] = from_expr(parse_infix("8 < x % 8"));
  auto ms = ematch(g, r.lhs);
  REQUIRE(ms.size() == 1);
  CHECK(r.cond.holds(g, ms[0].subst));
  auto [h, r2] = from_expr(parse_infix("7 < x % 8"));
  auto ms2 = ematch(h, r.lhs);
  REQUIRE(ms2.size() == 1);
  CHECK_FALSE(r.cond.holds(h, ms2[0].subst));
  std::string before = h.dump();
  r.cond.holds(h, ms2[0].subst);
  CHECK(h.dump() == before);

  std::vector<Value> vals = {Value(Integer(8)), Value(Integer(3)), Value(Integer(-8))};
  CHECK(r.cond.holds_on_values(vals));
  vals[0] = Value(Integer(7));
  CHECK_FALSE(r.cond.holds_on_values(vals));

  CHECK(print_condition(r.cond, r.lhs.vars) ==
        "(and (const ?c) (nonconst ?a) (pred (<= (abs ?b) ?c)))");
}

TEST_CASE("isvar condition") {
  Rule r = parse_rule("(rule t (!= ?x ?c) true :if (isvar ?x) (const ?c))");
  auto [g, root] = from_expr(parse_infix("x != 5"));
  auto ms = ematch(g, r.lhs);
  REQUIRE(ms.size() == 1);
  CHECK(r.cond.holds(g, ms[0].subst));
  auto [h, r2] = from_expr(parse_infix("x + 1 != 5"));
  auto ms2 = ematch(h, r.lhs);
  REQUIRE(ms2.size() == 1);
  CHECK_FALSE(r.cond.holds(h, ms2[0].subst));
}

TEST_CASE("rule parse errors") {
  CHECK_THROWS_AS(parse_rule("(rule r (+ ?x 0) ?y)"), SyntaxError);
  CHECK_THROWS_AS(parse_rule("(rule r (+ ?x 0) (< ?x 0))"), SortError);
  CHECK_THROWS_AS(parse_rule("(rule r ?x (+ ?x 0))"), SortError);
  CHECK_THROWS_AS(parse_rule("(rule r (+ ?x 0) ?x :if (frob ?x))"), SyntaxError);
  CHECK_THROWS_AS(parse_rule("(rule r (+ ?x 0) ?x :if (const ?q))"), SyntaxError);
  CHECK_THROWS_AS(parse_rule("(rule r (&& ?x ?x) (+ ?x 0))"), SortError);
}

TEST_CASE("rule print round trip") {
  for (const Rule& r : default_ruleset().rules) {
    Rule back = parse_rule(print_rule(r));
    CHECK(print_rule(back) == print_rule(r));
  }
}

TEST_CASE("one iteration is independent of rule order") {
  const Ruleset& base = default_ruleset();
  std::mt19937_64 rng(81);
  const char* exprs[] = {"(a*2)/2", "a - b + b < a + 1", "min(a, b) + c <= max(a + c, b + c)",
                         "(x % 4) * 2 == x", "!(a < b) || b <= a"};
  EngineConfig cfg;
  cfg.ilc_enabled = false;
  cfg.nppd_enabled = false;
  cfg.pulse_threshold.reset();
  cfg.deterministic = true;
  for (const char* text : exprs) {
    Expr e = parse_infix(text);
    std::optional<std::set<Expr>> reference;
    for (int perm = 0; perm < 4; ++perm) {
      Ruleset rs = base;
      std::shuffle(rs.rules.begin(), rs.rules.end(), rng);
      auto [g, root] = from_expr(e);
      Deadline d = Deadline::virtual_clock(cfg.time_limit);
      run_saturation(g, root, rs, {}, cfg, d, 2);
      auto terms = oracle::terms_upto(g, root, 3);
      if (!reference) {
        reference = terms;
      } else {
        REQUIRE(terms == *reference);
      }
    }
  }
}
