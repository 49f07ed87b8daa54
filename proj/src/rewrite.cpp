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

#include "eqprove/rewrite.hpp"

#include <algorithm>
#include <sstream>

namespace eqprove {

// ---------------------------------------------------------------------------
// Conditions

namespace {

std::optional<Value> eval_cond_expr(const CondExpr& e, std::span<const Value> values) {
  switch (e.kind) {
    case CondExpr::Kind::Var:
      return values[e.var];
    case CondExpr::Kind::Lit:
      return e.lit;
    case CondExpr::Kind::Abs: {
      auto v = eval_cond_expr(e.args[0], values);
      if (!v || !std::holds_alternative<Integer>(*v)) return std::nullopt;
      return Value(Integer(abs(std::get<Integer>(*v))));
    }
    case CondExpr::Kind::Apply: {
      Value args[2];
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        auto v = eval_cond_expr(e.args[i], values);
        if (!v) return std::nullopt;
        args[i] = std::move(*v);
      }
      try {
        return apply_op(e.op, std::span<const Value>(args, e.args.size()));
      } catch (const EvalError&) {
        return std::nullopt;
      }
    }
  }
  return std::nullopt;
}

bool pred_true(const CondExpr& pred, std::span<const Value> values) {
  auto v = eval_cond_expr(pred, values);
  return v && std::holds_alternative<bool>(*v) && std::get<bool>(*v);
}

void collect_vars(const CondExpr& e, std::vector<std::uint32_t>& out) {
  if (e.kind == CondExpr::Kind::Var) out.push_back(e.var);
  for (const CondExpr& a : e.args) collect_vars(a, out);
}

}  // namespace

bool Condition::holds(const EGraph& g, const Substitution& s) const {
  for (const CondAtom& a : atoms) {
    switch (a.kind) {
      case CondAtom::Kind::IsConst:
        if (!g.data(s[a.var])) return false;
        break;
      case CondAtom::Kind::NonConst:
        if (g.data(s[a.var])) return false;
        break;
      case CondAtom::Kind::IsVar:
        if (!g.eclass(s[a.var]).has_var) return false;
        break;
      case CondAtom::Kind::NonZero: {
        const ConstDatum& d = g.data(s[a.var]);
        if (!d || !std::holds_alternative<Integer>(*d) || std::get<Integer>(*d) == 0) return false;
        break;
      }
      case CondAtom::Kind::Pred: {
        std::vector<std::uint32_t> used;
        collect_vars(a.pred, used);
        std::vector<Value> values(s.size(), Value(Integer(0)));
        for (std::uint32_t v : used) {
          const ConstDatum& d = g.data(s[v]);
          if (!d) return false;
          values[v] = *d;
        }
        if (!pred_true(a.pred, values)) return false;
        break;
      }
    }
  }
  return true;
}

bool Condition::holds_on_values(std::span<const Value> values) const {
  for (const CondAtom& a : atoms) {
    switch (a.kind) {
      case CondAtom::Kind::IsConst:
      case CondAtom::Kind::NonConst:
      case CondAtom::Kind::IsVar:
        break;
      case CondAtom::Kind::NonZero: {
        const Value& v = values[a.var];
        if (!std::holds_alternative<Integer>(v) || std::get<Integer>(v) == 0) return false;
        break;
      }
      case CondAtom::Kind::Pred:
        if (!pred_true(a.pred, values)) return false;
        break;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// E-matching

namespace {

std::pair<std::vector<ENode>::const_iterator, std::vector<ENode>::const_iterator> nodes_with_op(
    const EClass& c, Op op) {
  auto lo = std::lower_bound(c.nodes.begin(), c.nodes.end(), op,
                             [](const ENode& n, Op o) { return n.op < o; });
  auto hi = std::upper_bound(lo, c.nodes.end(), op, [](Op o, const ENode& n) { return o < n.op; });
  return {lo, hi};
}

// Backtracking top-down matcher. Pending (pattern, class) obligations live on
// an explicit stack; every complete binding is handed to the sink.
template <class Sink>
class Machine {
public:
  Machine(const EGraph& g, std::size_t num_vars, Sink& sink)
      : g_(g), subst_(num_vars, kUnbound), sink_(sink) {}

  void run(const PatternNode& p, EClassId c) {
    stack_.clear();
    stack_.emplace_back(&p, c);
    step();
  }

  bool stopped() const { return stop_; }

private:
  void step() {
    if (stop_) return;
    if (stack_.empty()) {
      stop_ = !sink_(subst_);
      return;
    }
    auto [p, c] = stack_.back();
    stack_.pop_back();
    visit(*p, c);
    stack_.emplace_back(p, c);
  }

  void visit(const PatternNode& p, EClassId c) {
    if (p.is_var) {
      EClassId& slot = subst_[p.var];
      if (slot == kUnbound) {
        slot = c;
        step();
        slot = kUnbound;
      } else if (slot == c) {
        step();
      }
      return;
    }
    switch (p.op) {
      case Op::Int: {
        const ConstDatum& d = g_.data(c);
        if (d && std::holds_alternative<Integer>(*d) && std::get<Integer>(*d) == std::get<Integer>(p.leaf)) {
          step();
        }
        return;
      }
      case Op::Bool: {
        const ConstDatum& d = g_.data(c);
        if (d && std::holds_alternative<bool>(*d) && std::get<bool>(*d) == std::get<bool>(p.leaf)) {
          step();
        }
        return;
      }
      case Op::Var: {
        auto [lo, hi] = nodes_with_op(g_.eclass(c), Op::Var);
        for (auto it = lo; it != hi; ++it) {
          if (g_.symbol(it->payload) == std::get<std::string>(p.leaf)) {
            step();
            return;
          }
        }
        return;
      }
      default:
        break;
    }
    auto [lo, hi] = nodes_with_op(g_.eclass(c), p.op);
    const std::size_t n = p.children.size();
    for (auto it = lo; it != hi && !stop_; ++it) {
      ENode node = *it;
      for (std::size_t i = n; i-- > 0;) {
        stack_.emplace_back(&p.children[i], g_.find(node.kids[i]));
      }
      step();
      stack_.resize(stack_.size() - n);
    }
  }

  const EGraph& g_;
  Substitution subst_;
  Sink& sink_;
  std::vector<std::pair<const PatternNode*, EClassId>> stack_;
  bool stop_ = false;
};

// Polling strides for the interrupt callback: candidate classes, matches.
constexpr std::size_t kInterruptStride = 64;
constexpr std::size_t kMatchStride = 4096;

bool search_classes(const EGraph& g, std::span<const EClassId> classes, const Pattern& p,
                    std::vector<Match>& out, std::size_t limit,
                    const std::function<bool()>& interrupt) {
  std::size_t found = 0;
  bool interrupted = false;
  EClassId current = 0;
  auto sink = [&](const Substitution& s) {
    out.push_back(Match{current, s});
    ++found;
    if (interrupt && found % kMatchStride == 0 && interrupt()) {
      interrupted = true;
      return false;
    }
    return found < limit;
  };
  Machine<decltype(sink)> machine(g, p.num_vars(), sink);
  if (limit == 0) return true;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (interrupt && i % kInterruptStride == kInterruptStride - 1 && interrupt()) return false;
    current = classes[i];
    machine.run(p.root, current);
    if (machine.stopped()) break;
  }
  return !interrupted;
}

}  // namespace

MatchIndex::MatchIndex(const EGraph& g) {
  all_ = g.class_ids();
  for (EClassId id : all_) {
    const auto& nodes = g.eclass(id).nodes;
    Op last = Op::Var;
    bool first = true;
    for (const ENode& n : nodes) {
      if (first || n.op != last) {
        by_op_[static_cast<std::size_t>(n.op)].push_back(id);
        last = n.op;
        first = false;
      }
    }
  }
  for (auto& v : by_op_) {
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
}

bool search(const EGraph& g, const MatchIndex& index, const Pattern& p, std::vector<Match>& out,
            std::size_t limit, const std::function<bool()>& interrupt) {
  std::span<const EClassId> classes = p.root.is_var ? index.all() : index.classes_with(p.root.op);
  return search_classes(g, classes, p, out, limit, interrupt);
}

std::vector<Match> ematch(const EGraph& g, const Pattern& p) {
  MatchIndex index(g);
  std::vector<Match> out;
  search(g, index, p, out);
  return out;
}

std::vector<Match> ematch_class(const EGraph& g, const Pattern& p, EClassId eclass) {
  std::vector<Match> out;
  EClassId c = g.find(eclass);
  search_classes(g, std::span<const EClassId>(&c, 1), p, out,
                 std::numeric_limits<std::size_t>::max(), {});
  return out;
}

namespace {

EClassId instantiate_node(EGraph& g, const PatternNode& p, const Substitution& s) {
  if (p.is_var) return g.find(s[p.var]);
  switch (p.op) {
    case Op::Var: return g.add_var(std::get<std::string>(p.leaf));
    case Op::Int: return g.add_int(std::get<Integer>(p.leaf));
    case Op::Bool: return g.add_bool(std::get<bool>(p.leaf));
    default: break;
  }
  ENode n;
  n.op = p.op;
  for (std::size_t i = 0; i < p.children.size(); ++i) {
    n.kids[i] = instantiate_node(g, p.children[i], s);
  }
  return g.add(n);
}

}  // namespace

EClassId instantiate(EGraph& g, const Pattern& p, const Substitution& s) {
  return instantiate_node(g, p.root, s);
}

std::size_t apply_rule(EGraph& g, const Rule& r) {
  std::vector<Match> matches = ematch(g, r.lhs);
  std::erase_if(matches, [&](const Match& m) { return !r.cond.holds(g, m.subst); });
  std::size_t unions = 0;
  for (const Match& m : matches) {
    EClassId rhs = instantiate(g, r.rhs, m.subst);
    if (g.find(rhs) != g.find(m.eclass)) {
      g.merge(rhs, m.eclass);
      ++unions;
    }
  }
  return unions;
}

// ---------------------------------------------------------------------------
// Ground instantiation and sorts

namespace {

Expr ground_node(const PatternNode& p, std::span<const Value> values) {
  if (p.is_var) {
    const Value& v = values[p.var];
    if (std::holds_alternative<bool>(v)) return Expr::boolean(std::get<bool>(v));
    return Expr::integer(std::get<Integer>(v));
  }
  switch (p.op) {
    case Op::Var: return Expr::var(std::get<std::string>(p.leaf));
    case Op::Int: return Expr::integer(std::get<Integer>(p.leaf));
    case Op::Bool: return Expr::boolean(std::get<bool>(p.leaf));
    default: break;
  }
  std::vector<Expr> kids;
  for (const PatternNode& c : p.children) kids.push_back(ground_node(c, values));
  return Expr::make(p.op, std::move(kids));
}

void infer_node(const PatternNode& p, std::vector<std::optional<Sort>>& sorts,
                const std::vector<std::string>& names) {
  for (const PatternNode& c : p.children) {
    Sort want = operand_sort(p.op);
    if (c.is_var) {
      auto& slot = sorts[c.var];
      if (slot && *slot != want) {
        throw SortError("pattern variable ?" + names[c.var] + " is used at two sorts");
      }
      slot = want;
    } else if (result_sort(c.op) != want) {
      throw SortError("operand of '" + std::string(op_symbol(p.op)) + "' has the wrong sort");
    }
    infer_node(c, sorts, names);
  }
}

}  // namespace

Expr ground(const Pattern& p, std::span<const Value> values) { return ground_node(p.root, values); }

std::vector<Sort> infer_var_sorts(const Pattern& p) {
  std::vector<std::optional<Sort>> sorts(p.num_vars());
  infer_node(p.root, sorts, p.vars);
  std::vector<Sort> out;
  for (std::size_t i = 0; i < sorts.size(); ++i) {
    out.push_back(sorts[i].value_or(Sort::Int));
  }
  return out;
}

Sort pattern_sort(const Pattern& p, std::span<const Sort> var_sorts) {
  if (p.root.is_var) return var_sorts[p.root.var];
  return result_sort(p.root.op);
}

// ---------------------------------------------------------------------------
// Parsing and printing

PatternNode parse_pattern_node(const sexpr::Node& n, std::vector<std::string>& vars,
                               bool allow_new_vars) {
  PatternNode out;
  if (!n.is_list) {
    const std::string& a = n.atom;
    if (a.size() > 1 && a[0] == '?') {
      std::string name = a.substr(1);
      if (!is_ident(name)) throw SyntaxError("bad pattern variable '" + a + "'", n.offset);
      auto it = std::find(vars.begin(), vars.end(), name);
      if (it == vars.end()) {
        if (!allow_new_vars) {
          throw SyntaxError("pattern variable " + a + " does not occur on the left-hand side",
                            n.offset);
        }
        vars.push_back(name);
        it = vars.end() - 1;
      }
      out.is_var = true;
      out.var = static_cast<std::uint32_t>(it - vars.begin());
      return out;
    }
    if (a == "true" || a == "false") {
      out.op = Op::Bool;
      out.leaf = (a == "true");
    } else if (is_int_atom(a)) {
      out.op = Op::Int;
      out.leaf = Integer(a);
    } else if (is_ident(a)) {
      out.op = Op::Var;
      out.leaf = a;
    } else {
      throw SyntaxError("bad atom '" + a + "'", n.offset);
    }
    return out;
  }
  if (n.items.empty() || n.items[0].is_list) {
    throw SyntaxError("expected an operator symbol", n.offset);
  }
  out.op = parse_op_symbol(n.items[0].atom, n.items.size() - 1, n.offset);
  for (std::size_t i = 1; i < n.items.size(); ++i) {
    out.children.push_back(parse_pattern_node(n.items[i], vars, allow_new_vars));
  }
  return out;
}

Pattern parse_pattern(std::string_view text) {
  Pattern p;
  p.root = parse_pattern_node(sexpr::read_one(text), p.vars, true);
  infer_var_sorts(p);
  return p;
}

namespace {

void print_pattern_node(std::ostream& os, const PatternNode& p, const std::vector<std::string>& vars) {
  if (p.is_var) {
    os << '?' << vars[p.var];
    return;
  }
  switch (p.op) {
    case Op::Var: os << std::get<std::string>(p.leaf); return;
    case Op::Int: os << std::get<Integer>(p.leaf).str(); return;
    case Op::Bool: os << (std::get<bool>(p.leaf) ? "true" : "false"); return;
    default: break;
  }
  os << '(' << op_symbol(p.op);
  for (const PatternNode& c : p.children) {
    os << ' ';
    print_pattern_node(os, c, vars);
  }
  os << ')';
}

std::uint32_t cond_var(const sexpr::Node& n, const std::vector<std::string>& vars) {
  if (n.is_list || n.atom.size() < 2 || n.atom[0] != '?') {
    throw SyntaxError("expected a pattern variable", n.offset);
  }
  auto it = std::find(vars.begin(), vars.end(), n.atom.substr(1));
  if (it == vars.end()) {
    throw SyntaxError("condition variable " + n.atom + " does not occur in the pattern", n.offset);
  }
  return static_cast<std::uint32_t>(it - vars.begin());
}

CondExpr parse_cond_expr(const sexpr::Node& n, const std::vector<std::string>& vars) {
  CondExpr e;
  if (!n.is_list) {
    if (!n.atom.empty() && n.atom[0] == '?') {
      e.kind = CondExpr::Kind::Var;
      e.var = cond_var(n, vars);
    } else if (n.atom == "true" || n.atom == "false") {
      e.lit = (n.atom == "true");
    } else if (is_int_atom(n.atom)) {
      e.lit = Integer(n.atom);
    } else {
      throw SyntaxError("bad atom '" + n.atom + "' in condition", n.offset);
    }
    return e;
  }
  if (n.items.empty() || n.items[0].is_list) {
    throw SyntaxError("expected an operator symbol", n.offset);
  }
  const std::string& head = n.items[0].atom;
  if (head == "abs") {
    if (n.items.size() != 2) throw SyntaxError("arity error: 'abs' takes 1 operand", n.offset);
    e.kind = CondExpr::Kind::Abs;
  } else {
    e.kind = CondExpr::Kind::Apply;
    e.op = parse_op_symbol(head, n.items.size() - 1, n.offset);
  }
  for (std::size_t i = 1; i < n.items.size(); ++i) {
    e.args.push_back(parse_cond_expr(n.items[i], vars));
  }
  return e;
}

void parse_cond_atom(const sexpr::Node& n, const std::vector<std::string>& vars,
                     std::vector<CondAtom>& out) {
  if (!n.is_list || n.items.empty() || n.items[0].is_list) {
    throw SyntaxError("expected a condition form", n.offset);
  }
  const std::string& head = n.items[0].atom;
  if (head == "and") {
    for (std::size_t i = 1; i < n.items.size(); ++i) parse_cond_atom(n.items[i], vars, out);
    return;
  }
  if (n.items.size() != 2) {
    throw SyntaxError("arity error: '" + head + "' takes 1 operand", n.offset);
  }
  CondAtom a;
  if (head == "pred") {
    a.kind = CondAtom::Kind::Pred;
    a.pred = parse_cond_expr(n.items[1], vars);
  } else {
    if (head == "const") {
      a.kind = CondAtom::Kind::IsConst;
    } else if (head == "nonconst") {
      a.kind = CondAtom::Kind::NonConst;
    } else if (head == "isvar") {
      a.kind = CondAtom::Kind::IsVar;
    } else if (head == "nonzero") {
      a.kind = CondAtom::Kind::NonZero;
    } else {
      throw SyntaxError("unknown condition '" + head + "'", n.offset);
    }
    a.var = cond_var(n.items[1], vars);
  }
  out.push_back(std::move(a));
}

void print_cond_expr(std::ostream& os, const CondExpr& e, const std::vector<std::string>& vars) {
  switch (e.kind) {
    case CondExpr::Kind::Var: os << '?' << vars[e.var]; return;
    case CondExpr::Kind::Lit: os << to_string(e.lit); return;
    case CondExpr::Kind::Abs: os << "(abs"; break;
    case CondExpr::Kind::Apply: os << '(' << op_symbol(e.op); break;
  }
  for (const CondExpr& a : e.args) {
    os << ' ';
    print_cond_expr(os, a, vars);
  }
  os << ')';
}

void print_cond_atom(std::ostream& os, const CondAtom& a, const std::vector<std::string>& vars) {
  switch (a.kind) {
    case CondAtom::Kind::IsConst: os << "(const ?" << vars[a.var] << ')'; return;
    case CondAtom::Kind::NonConst: os << "(nonconst ?" << vars[a.var] << ')'; return;
    case CondAtom::Kind::IsVar: os << "(isvar ?" << vars[a.var] << ')'; return;
    case CondAtom::Kind::NonZero: os << "(nonzero ?" << vars[a.var] << ')'; return;
    case CondAtom::Kind::Pred:
      os << "(pred ";
      print_cond_expr(os, a.pred, vars);
      os << ')';
      return;
  }
}

}  // namespace

std::string print_pattern(const Pattern& p) {
  std::ostringstream os;
  print_pattern_node(os, p.root, p.vars);
  return os.str();
}

Condition parse_condition(std::span<const sexpr::Node> items, const std::vector<std::string>& vars) {
  Condition c;
  for (const sexpr::Node& n : items) parse_cond_atom(n, vars, c.atoms);
  return c;
}

std::string print_condition(const Condition& c, const std::vector<std::string>& vars) {
  std::ostringstream os;
  if (c.atoms.size() == 1) {
    print_cond_atom(os, c.atoms[0], vars);
  } else if (!c.atoms.empty()) {
    os << "(and";
    for (const CondAtom& a : c.atoms) {
      os << ' ';
      print_cond_atom(os, a, vars);
    }
    os << ')';
  }
  return os.str();
}

void check_rule(const Rule& r) {
  if (r.lhs.root.is_var) {
    throw SortError("rule " + r.name + ": left-hand side must not be a bare variable");
  }
  std::vector<Sort> sorts = infer_var_sorts(r.lhs);
  Pattern rhs_view = r.rhs;
  rhs_view.vars = r.lhs.vars;
  std::vector<Sort> rhs_sorts = infer_var_sorts(rhs_view);
  std::vector<bool> used(r.lhs.num_vars(), false);
  auto mark = [&](auto&& self, const PatternNode& p) -> void {
    if (p.is_var) used[p.var] = true;
    for (const PatternNode& c : p.children) self(self, c);
  };
  mark(mark, r.rhs.root);
  for (std::size_t i = 0; i < sorts.size(); ++i) {
    if (used[i] && rhs_sorts[i] != sorts[i] && !(r.rhs.root.is_var && r.rhs.root.var == i)) {
      throw SortError("rule " + r.name + ": ?" + r.lhs.vars[i] + " changes sort across sides");
    }
  }
  if (pattern_sort(r.lhs, sorts) != pattern_sort(rhs_view, sorts)) {
    throw SortError("rule " + r.name + ": sides have different sorts");
  }
}

Rule parse_rule(const sexpr::Node& n) {
  if (!n.is_list || n.items.size() < 4 || !n.items[0].is_atom("rule") || n.items[1].is_list) {
    throw SyntaxError("expected (rule <name> <lhs> <rhs> [:if <cond>])", n.offset);
  }
  Rule r;
  r.name = n.items[1].atom;
  r.lhs.root = parse_pattern_node(n.items[2], r.lhs.vars, true);
  r.rhs.vars = r.lhs.vars;
  r.rhs.root = parse_pattern_node(n.items[3], r.rhs.vars, false);
  if (n.items.size() > 4) {
    if (!n.items[4].is_atom(":if") || n.items.size() < 6) {
      throw SyntaxError("expected ':if <cond>' after the right-hand side", n.items[4].offset);
    }
    r.cond = parse_condition(std::span<const sexpr::Node>(n.items).subspan(5), r.lhs.vars);
  }
  check_rule(r);
  return r;
}

Rule parse_rule(std::string_view text) { return parse_rule(sexpr::read_one(text)); }

std::string print_rule(const Rule& r) {
  std::ostringstream os;
  os << "(rule " << r.name << ' ' << print_pattern(r.lhs) << ' ' << print_pattern(r.rhs);
  if (!r.cond.empty()) os << " :if " << print_condition(r.cond, r.lhs.vars);
  os << ')';
  return os.str();
}

}  // namespace eqprove
