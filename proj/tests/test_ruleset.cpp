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

#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "eqprove/engine.hpp"
#include "eqprove/ruleset.hpp"
#include "support/oracle.hpp"
#include "support/soundness.hpp"

using namespace eqprove;

namespace {

std::string write_temp(const std::string& name, const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / ("eqprove_test_" + name);
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST_CASE("default ruleset inventory") {
  const Ruleset& rs = default_ruleset();
  CHECK(rs.size() >= 100);
  CHECK(rs.name == "default");
  std::set<std::string> names;
  for (const Rule& r : rs.rules) names.insert(r.name);
  CHECK(names.size() == rs.size());
  const Rule* mul_one = rs.find("mul-one");
  REQUIRE(mul_one != nullptr);
  CHECK(print_rule(*mul_one) == "(rule mul-one (* ?a 1) ?a)");
  CHECK(default_nppd_patterns().size() == 5);
}

TEST_CASE("every built-in rule is sound on random ground instances") {
  std::mt19937_64 rng(101);
  for (const Rule& r : default_ruleset().rules) {
    auto report = soundness::check_rule(r, rng, 2000);
    INFO(r.name);
    CHECK(report.counterexamples == 0);
    CHECK(report.applicable >= 20);
  }
}

TEST_CASE("an unsound rule is caught") {
  std::mt19937_64 rng(103);
  Rule bad = parse_rule("(rule bad (/ (* ?x ?y) ?z) (* ?x (/ ?y ?z)))");
  CHECK(soundness::check_rule(bad, rng, 2000).counterexamples > 0);
  Rule bad_mod = parse_rule("(rule bad-mod (<= ?c (% ?a ?b)) true :if (const ?c) (const ?b) "
                            "(pred (&& (<= ?c 0) (!= ?b 0))))");
  CHECK(soundness::check_rule(bad_mod, rng, 2000).counterexamples > 0);
}

TEST_CASE("non-provable patterns are contingent whenever they fire") {
  std::mt19937_64 rng(107);
  for (const NPPattern& p : default_nppd_patterns()) {
    auto report = soundness::check_nppd(p, rng, 300);
    INFO(p.id);
    CHECK(report.fired >= 20);
    CHECK(report.decided == 0);
  }
}

TEST_CASE("non-provable pattern examples") {
  const auto& ps = default_nppd_patterns();
  auto flag = [&](const char* text) {
    auto [g, root] = from_expr(parse_infix(text));
    return nppd_check(g, root, ps);
  };
  CHECK(flag("x != 5") == std::optional<std::string>("P1"));
  CHECK(flag("2 < x % 8") == std::optional<std::string>("P2"));
  CHECK_FALSE(flag("8 < x % 8").has_value());
  CHECK_FALSE(flag("7 < x % 8").has_value());
  CHECK(flag("x % 8 < 3") == std::optional<std::string>("P3"));
  CHECK(flag("x == 4") == std::optional<std::string>("P4"));
  CHECK(flag("3 < x") == std::optional<std::string>("P5"));
  CHECK_FALSE(flag("x < y").has_value());
  CHECK_FALSE(flag("x + y != 5").has_value());
}

TEST_CASE("rule file loading") {
  CHECK(parse_rules("").size() == 0);
  CHECK(load_rules(write_temp("empty.rules", "")).size() == 0);
  CHECK(parse_rules("; only a comment\n").size() == 0);

  try {
    parse_rules("(rule a (+ ?x 0) ?x)\n\n(rule b (+ ?x 0) ?y)\n", "t.rules");
    FAIL("expected a free variable error");
  } catch (const RuleFileError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).rfind("t.rules:3:", 0) == 0);
  }
  CHECK_THROWS_AS(parse_rules("(rule a (+ ?x 0) ?x)\n(rule a (* ?x 1) ?x)\n"), RuleFileError);
  CHECK_THROWS_AS(parse_rules("(rule a (+ ?x 0) (< ?x 1))\n"), RuleFileError);
  CHECK_THROWS_AS(parse_rules("(rule a (+ ?x 0) ?x\n"), RuleFileError);
  CHECK_THROWS_AS(load_rules("/nonexistent/eqprove.rules"), Error);

  Ruleset rs = parse_rules("(ruleset mine 2.1)\n(rule a (+ ?x 0) ?x)\n");
  CHECK(rs.name == "mine");
  CHECK(rs.version == "2.1");
  CHECK(rs.find("a") != nullptr);
  CHECK(rs.find("b") == nullptr);
}

TEST_CASE("serialize round trips") {
  std::string text = serialize_rules(default_ruleset());
  Ruleset back = parse_rules(text);
  CHECK(back.size() == default_ruleset().size());
  CHECK(serialize_rules(back) == text);
  Ruleset from_file = load_rules(write_temp("default.rules", text));
  CHECK(serialize_rules(from_file) == text);

  std::string np = serialize_nppd(default_nppd_patterns());
  auto np_back = parse_nppd(np);
  CHECK(np_back.size() == 5);
  CHECK(serialize_nppd(np_back) == np);
  CHECK(serialize_nppd(load_nppd(write_temp("default.nppd", np))) == np);
}

TEST_CASE("nppd file errors") {
  CHECK_THROWS_AS(parse_nppd("(nppd P9 (+ ?x 1))\n"), RuleFileError);
  CHECK_THROWS_AS(parse_nppd("(nppd P1 (!= ?x ?c))\n(nppd P1 (== ?x ?c))\n"), RuleFileError);
  CHECK(parse_nppd("").empty());
}
