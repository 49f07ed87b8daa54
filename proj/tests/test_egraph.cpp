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

#include <random>
#include <set>

#include "eqprove/egraph.hpp"
#include "eqprove/extract.hpp"
#include "support/oracle.hpp"

using namespace eqprove;

namespace {

ENode bin(Op op, EClassId a, EClassId b) {
  ENode n;
  n.op = op;
  n.kids = {a, b};
  return n;
}

ENode un(Op op, EClassId a) {
  ENode n;
  n.op = op;
  n.kids = {a, 0};
  return n;
}

void collect_subterms(const Expr& e, std::set<Expr>& out) {
  out.insert(e);
  for (const Expr& c : e.children()) collect_subterms(c, out);
}

}  // namespace

TEST_CASE("hashcons deduplicates leaves and nodes") {
  EGraph g;
  CHECK(g.num_classes() == 0);
  CHECK(g.num_nodes() == 0);
  EClassId two = g.add_int(Integer(2));
  CHECK(g.add_int(Integer(2)) == two);
  EClassId a = g.add_var("a");
  EClassId m = g.add(bin(Op::Mul, a, two));
  std::size_t nodes = g.num_nodes();
  CHECK(g.add(bin(Op::Mul, a, two)) == m);
  CHECK(g.num_nodes() == nodes);
}

TEST_CASE("two-level structure of (a*2)/2") {
  EGraph g;
  EClassId a = g.add_var("a");
  EClassId two = g.add_int(Integer(2));
  EClassId m = g.add(bin(Op::Mul, a, two));
  g.add(bin(Op::Div, m, two));
  g.rebuild();
  CHECK(g.num_classes() == 4);
  CHECK(g.num_nodes() == 4);

  auto [h, root] = from_expr(parse_infix("(a*2)/2"));
  CHECK(h.num_classes() == 4);
  CHECK(h.num_nodes() == 4);
  CHECK(h.dump() ==
        "c0: a\n"
        "c1 = 2: 2\n"
        "c2: (* c0 c1)\n"
        "c3: (/ c2 c1)\n");
  CHECK(extract_best(h, root).first == parse_infix("(a*2)/2"));
}

TEST_CASE("from_expr on a variable") {
  auto [g, root] = from_expr(Expr::var("x"));
  CHECK(g.num_classes() == 1);
  CHECK(g.num_nodes() == 1);
  CHECK(g.find(root) == root);
}

TEST_CASE("class count equals distinct subterms") {
  std::mt19937_64 rng(21);
  oracle::ExprGen gen{rng};
  gen.allow_div = false;
  for (int i = 0; i < 300; ++i) {
    // Constant subterms fold into literals, so keep the generator to
    // variables for an exact count.
    gen.const_lo = 0;
    gen.const_hi = 0;
    Expr e = gen.int_expr(5);
    std::set<Expr> subs;
    collect_subterms(e, subs);
    bool has_const = false;
    for (const Expr& s : subs) has_const = has_const || s.op() == Op::Int;
    if (has_const) continue;
    auto [g, root] = from_expr(e);
    REQUIRE(g.num_classes() == subs.size());
    REQUIRE(g.num_nodes() == subs.size());
    REQUIRE(extract_best(g, root).first == e);
  }
}

TEST_CASE("union and find basics") {
  EGraph g;
  EClassId a = g.add_var("a");
  EClassId b = g.add_var("b");
  CHECK(g.find(a) == a);
  CHECK(g.merge(a, a) == a);
  CHECK(g.is_clean());
  EClassId r = g.merge(b, a);
  CHECK(r == std::min(a, b));
  CHECK(g.find(a) == g.find(b));
  CHECK(g.find(g.find(b)) == g.find(b));
}

TEST_CASE("congruence after union") {
  EGraph g;
  EClassId a = g.add_var("a");
  EClassId b = g.add_var("b");
  EClassId fa = g.add(un(Op::Neg, a));
  EClassId fb = g.add(un(Op::Neg, b));
  EClassId gfa = g.add(bin(Op::Add, fa, a));
  EClassId gfb = g.add(bin(Op::Add, fb, b));
  CHECK(g.find(fa) != g.find(fb));
  g.merge(a, b);
  g.rebuild();
  CHECK(g.find(fa) == g.find(fb));
  CHECK(g.find(gfa) == g.find(gfb));
  CHECK(oracle::invariants_hold(g));
  std::size_t classes = g.num_classes();
  g.rebuild();
  CHECK(g.num_classes() == classes);
}

TEST_CASE("find matches a naive union-find on random union sequences") {
  std::mt19937_64 rng(31);
  for (int round = 0; round < 1000; ++round) {
    EGraph g;
    oracle::NaiveUnionFind uf;
    std::uniform_int_distribution<int> size_d(2, 24);
    int n = size_d(rng);
    std::vector<EClassId> ids;
    for (int i = 0; i < n; ++i) {
      ids.push_back(g.add_var("v" + std::to_string(i)));
      uf.make();
    }
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::size_t effective = 0;
    int k = std::uniform_int_distribution<int>(0, 2 * n)(rng);
    for (int i = 0; i < k; ++i) {
      int x = pick(rng);
      int y = pick(rng);
      bool fresh = uf.unite(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
      std::size_t before = g.num_unions();
      g.merge(ids[static_cast<std::size_t>(x)], ids[static_cast<std::size_t>(y)]);
      REQUIRE((g.num_unions() - before == 1) == fresh);
      effective += fresh ? 1 : 0;
    }
    g.rebuild();
    REQUIRE(g.num_classes() == static_cast<std::size_t>(n) - effective);
    for (int x = 0; x < n; ++x) {
      for (int y = 0; y < n; ++y) {
        bool same = uf.find(static_cast<std::size_t>(x)) == uf.find(static_cast<std::size_t>(y));
        REQUIRE((g.find(ids[static_cast<std::size_t>(x)]) ==
                 g.find(ids[static_cast<std::size_t>(y)])) == same);
      }
    }
  }
}

TEST_CASE("rebuild matches brute-force congruence closure") {
  std::mt19937_64 rng(41);
  for (int round = 0; round < 200; ++round) {
    std::vector<oracle::TermNode> nodes;
    std::vector<EClassId> cls;
    EGraph g;
    std::uniform_int_distribution<int> count_d(4, 30);
    int count = count_d(rng);
    for (int i = 0; i < count; ++i) {
      oracle::TermNode t;
      int r = std::uniform_int_distribution<int>(0, 3)(rng);
      if (i < 3 || r == 0) {
        t.op = Op::Var;
        t.name = std::string(1, static_cast<char>('a' + std::uniform_int_distribution<int>(0, 2)(rng)));
        cls.push_back(g.add_var(t.name));
      } else {
        std::uniform_int_distribution<int> kid(0, i - 1);
        std::size_t x = static_cast<std::size_t>(kid(rng));
        std::size_t y = static_cast<std::size_t>(kid(rng));
        if (r == 1) {
          t.op = Op::Neg;
          t.kids = {x};
          cls.push_back(g.add(un(Op::Neg, cls[x])));
        } else {
          t.op = r == 2 ? Op::Add : Op::Mul;
          t.kids = {x, y};
          cls.push_back(g.add(bin(t.op, cls[x], cls[y])));
        }
      }
      nodes.push_back(t);
    }
    std::vector<std::pair<std::size_t, std::size_t>> unions;
    int k = std::uniform_int_distribution<int>(0, count / 2)(rng);
    std::uniform_int_distribution<int> pick(0, count - 1);
    for (int i = 0; i < k; ++i) {
      auto x = static_cast<std::size_t>(pick(rng));
      auto y = static_cast<std::size_t>(pick(rng));
      unions.emplace_back(x, y);
      g.merge(cls[x], cls[y]);
    }
    g.rebuild();
    REQUIRE(oracle::invariants_hold(g));
    auto rep = oracle::brute_congruence(nodes, unions);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      for (std::size_t j = 0; j < nodes.size(); ++j) {
        REQUIRE((g.find(cls[i]) == g.find(cls[j])) == (rep[i] == rep[j]));
      }
    }
  }
}

TEST_CASE("additivity: representable terms survive unions") {
  std::mt19937_64 rng(51);
  oracle::ExprGen gen{rng};
  gen.allow_div = false;
  for (int round = 0; round < 100; ++round) {
    EGraph g;
    std::vector<EClassId> roots;
    for (int i = 0; i < 3; ++i) roots.push_back(g.add_expr(gen.int_expr(3)));
    g.rebuild();
    std::vector<std::set<Expr>> before;
    for (EClassId r : roots) before.push_back(oracle::terms_upto(g, r, 4));
    std::uniform_int_distribution<int> pick(0, 2);
    auto x = roots[static_cast<std::size_t>(pick(rng))];
    auto y = roots[static_cast<std::size_t>(pick(rng))];
    if (g.data(x) && g.data(y) && *g.data(x) != *g.data(y)) continue;
    g.merge(x, y);
    g.rebuild();
    for (std::size_t i = 0; i < roots.size(); ++i) {
      auto after = oracle::terms_upto(g, roots[i], 4);
      for (const Expr& t : before[i]) REQUIRE(after.count(t) == 1);
    }
  }
}

TEST_CASE("constant analysis: make") {
  auto fold = [](Op op, long long a, long long b) {
    ConstDatum kids[2] = {Value(Integer(a)), Value(Integer(b))};
    return analysis::make(op, kids);
  };
  CHECK(*fold(Op::Add, 2, 3) == Value(Integer(5)));
  CHECK(*fold(Op::Lt, 8, 7) == Value(false));
  CHECK(*fold(Op::Div, -7, 2) == Value(Integer(-4)));
  CHECK(oracle::ref_div(-7, 2) == -4);
  ConstDatum partial[2] = {std::nullopt, Value(Integer(1))};
  CHECK(!analysis::make(Op::Add, partial));
}

TEST_CASE("constant analysis: join") {
  CHECK(*analysis::join(std::nullopt, Value(Integer(4))) == Value(Integer(4)));
  CHECK(*analysis::join(Value(true), Value(true)) == Value(true));
  CHECK_THROWS_AS(analysis::join(Value(Integer(3)), Value(Integer(4))), ConstantContradiction);
}

TEST_CASE("constant analysis: modify materializes literals") {
  auto [g, root] = from_expr(parse_infix("(2*3)/6"));
  bool has_one = false;
  for (const ENode& n : g.eclass(root).nodes) {
    has_one = has_one || (n.op == Op::Int && g.integer(n.payload) == 1);
  }
  CHECK(has_one);
  CHECK(*g.data(root) == Value(Integer(1)));

  auto [h, r2] = from_expr(parse_infix("1 < 2"));
  bool has_true = false;
  for (const ENode& n : h.eclass(r2).nodes) has_true = has_true || (n.op == Op::Bool && n.payload);
  CHECK(has_true);

  EGraph z;
  EClassId x = z.add_var("x");
  EClassId zero = z.add_int(Integer(0));
  EClassId sub = z.add(bin(Op::Sub, x, x));
  z.merge(sub, zero);
  z.rebuild();
  CHECK(*z.data(sub) == Value(Integer(0)));
}

TEST_CASE("constant analysis propagates upward through rebuild") {
  EGraph g;
  EClassId x = g.add_var("x");
  EClassId three = g.add_int(Integer(3));
  EClassId sum = g.add(bin(Op::Add, x, three));
  EClassId lt = g.add(bin(Op::Lt, sum, g.add_int(Integer(10))));
  g.merge(x, g.add_int(Integer(4)));
  g.rebuild();
  CHECK(*g.data(sum) == Value(Integer(7)));
  CHECK(*g.data(lt) == Value(true));
  CHECK(oracle::invariants_hold(g));
}

TEST_CASE("constant contradiction is fatal") {
  EGraph g;
  EClassId a = g.add_int(Integer(1));
  EClassId b = g.add_int(Integer(2));
  CHECK_THROWS_AS(g.merge(a, b), ConstantContradiction);
}

TEST_CASE("class data is sound for every enumerated term") {
  std::mt19937_64 rng(61);
  oracle::ExprGen gen{rng};
  for (int round = 0; round < 200; ++round) {
    EGraph g;
    g.add_expr(gen.int_expr(4));
    g.add_expr(gen.bool_expr(3));
    g.rebuild();
    for (EClassId c : g.class_ids()) {
      if (!g.data(c)) continue;
      auto want = oracle::to_ref(*g.data(c));
      for (const Expr& t : oracle::terms_upto(g, c, 3)) {
        auto env = oracle::random_assignment(rng, gen.vars);
        REQUIRE(oracle::ref_eval(t, env) == want);
      }
    }
  }
}
