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

#include "eqprove/expr.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "eqprove/sexpr.hpp"

namespace eqprove {

std::size_t arity(Op op) {
  switch (op) {
    case Op::Var:
    case Op::Int:
    case Op::Bool:
      return 0;
    case Op::Neg:
    case Op::Not:
      return 1;
    default:
      return 2;
  }
}

bool is_leaf(Op op) { return arity(op) == 0; }

Sort result_sort(Op op) {
  switch (op) {
    case Op::Bool:
    case Op::Not:
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge:
    case Op::Eq:
    case Op::Ne:
    case Op::And:
    case Op::Or:
      return Sort::Bool;
    default:
      return Sort::Int;
  }
}

Sort operand_sort(Op op) {
  switch (op) {
    case Op::Not:
    case Op::And:
    case Op::Or:
      return Sort::Bool;
    default:
      return Sort::Int;
  }
}

std::string_view op_symbol(Op op) {
  switch (op) {
    case Op::Var: return "var";
    case Op::Int: return "int";
    case Op::Bool: return "bool";
    case Op::Neg: return "-";
    case Op::Not: return "!";
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Div: return "/";
    case Op::Mod: return "%";
    case Op::Min: return "min";
    case Op::Max: return "max";
    case Op::Lt: return "<";
    case Op::Le: return "<=";
    case Op::Gt: return ">";
    case Op::Ge: return ">=";
    case Op::Eq: return "==";
    case Op::Ne: return "!=";
    case Op::And: return "&&";
    case Op::Or: return "||";
  }
  return "?";
}

SyntaxError::SyntaxError(const std::string& msg, std::size_t offset)
    : Error("syntax error at offset " + std::to_string(offset) + ": " + msg), offset_(offset) {}

std::string to_string(const Value& v) {
  if (const auto* b = std::get_if<bool>(&v)) {
    return *b ? "true" : "false";
  }
  return std::get<Integer>(v).str();
}

Sort sort_of(const Value& v) { return std::holds_alternative<bool>(v) ? Sort::Bool : Sort::Int; }

Integer floor_div(const Integer& a, const Integer& b) {
  if (b == 0) {
    return 0;
  }
  Integer q = a / b;  // truncates toward zero
  Integer r = a - q * b;
  if (r != 0 && ((r < 0) != (b < 0))) {
    --q;
  }
  return q;
}

Integer floor_mod(const Integer& a, const Integer& b) {
  if (b == 0) {
    return 0;
  }
  Integer r = a % b;  // sign follows the dividend
  if (r != 0 && ((r < 0) != (b < 0))) {
    r += b;
  }
  return r;
}

namespace {

const Integer& as_int(const Value& v) {
  if (const auto* i = std::get_if<Integer>(&v)) {
    return *i;
  }
  throw EvalError("expected an integer operand");
}

bool as_bool(const Value& v) {
  if (const auto* b = std::get_if<bool>(&v)) {
    return *b;
  }
  throw EvalError("expected a boolean operand");
}

}  // namespace

Value apply_op(Op op, std::span<const Value> args) {
  if (args.size() != arity(op) || is_leaf(op)) {
    throw EvalError("bad operand count for '" + std::string(op_symbol(op)) + "'");
  }
  switch (op) {
    case Op::Neg: return Value(Integer(-as_int(args[0])));
    case Op::Not: return Value(!as_bool(args[0]));
    case Op::Add: return Value(Integer(as_int(args[0]) + as_int(args[1])));
    case Op::Sub: return Value(Integer(as_int(args[0]) - as_int(args[1])));
    case Op::Mul: return Value(Integer(as_int(args[0]) * as_int(args[1])));
    case Op::Div: return Value(floor_div(as_int(args[0]), as_int(args[1])));
    case Op::Mod: return Value(floor_mod(as_int(args[0]), as_int(args[1])));
    case Op::Min: return Value(std::min(as_int(args[0]), as_int(args[1])));
    case Op::Max: return Value(std::max(as_int(args[0]), as_int(args[1])));
    case Op::Lt: return Value(as_int(args[0]) < as_int(args[1]));
    case Op::Le: return Value(as_int(args[0]) <= as_int(args[1]));
    case Op::Gt: return Value(as_int(args[0]) > as_int(args[1]));
    case Op::Ge: return Value(as_int(args[0]) >= as_int(args[1]));
    case Op::Eq: return Value(as_int(args[0]) == as_int(args[1]));
    case Op::Ne: return Value(as_int(args[0]) != as_int(args[1]));
    case Op::And: return Value(as_bool(args[0]) && as_bool(args[1]));
    case Op::Or: return Value(as_bool(args[0]) || as_bool(args[1]));
    default: break;
  }
  throw EvalError("cannot apply a leaf operator");
}

// ---------------------------------------------------------------------------
// Expr

Expr Expr::var(std::string name) {
  return Expr(std::make_shared<const Node>(Node{Op::Var, std::move(name), {}}));
}

Expr Expr::integer(Integer value) {
  return Expr(std::make_shared<const Node>(Node{Op::Int, std::move(value), {}}));
}

Expr Expr::boolean(bool value) {
  return Expr(std::make_shared<const Node>(Node{Op::Bool, value, {}}));
}

Expr Expr::unary(Op op, Expr child) {
  if (arity(op) != 1) {
    throw Error("'" + std::string(op_symbol(op)) + "' is not unary");
  }
  return Expr(std::make_shared<const Node>(Node{op, std::monostate{}, {std::move(child)}}));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
  if (arity(op) != 2) {
    throw Error("'" + std::string(op_symbol(op)) + "' is not binary");
  }
  return Expr(std::make_shared<const Node>(
      Node{op, std::monostate{}, {std::move(lhs), std::move(rhs)}}));
}

Expr Expr::make(Op op, std::vector<Expr> children) {
  if (is_leaf(op) || children.size() != arity(op)) {
    throw Error("bad child count for '" + std::string(op_symbol(op)) + "'");
  }
  return Expr(std::make_shared<const Node>(Node{op, std::monostate{}, std::move(children)}));
}

const std::string& Expr::name() const { return std::get<std::string>(node_->leaf); }
const Integer& Expr::int_value() const { return std::get<Integer>(node_->leaf); }
bool Expr::bool_value() const { return std::get<bool>(node_->leaf); }

Value Expr::literal() const {
  if (op() == Op::Int) {
    return int_value();
  }
  if (op() == Op::Bool) {
    return bool_value();
  }
  throw Error("expression is not a literal");
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) {
    return true;
  }
  if (a.op() != b.op() || a.node_->leaf != b.node_->leaf) {
    return false;
  }
  return a.children() == b.children();
}

bool operator<(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) {
    return false;
  }
  if (a.op() != b.op()) {
    return a.op() < b.op();
  }
  if (a.node_->leaf != b.node_->leaf) {
    return a.node_->leaf < b.node_->leaf;
  }
  return std::lexicographical_compare(a.children().begin(), a.children().end(),
                                      b.children().begin(), b.children().end());
}

// ---------------------------------------------------------------------------
// Sorts, evaluation, metrics

Sort sort_check(const Expr& e) {
  if (e.op() == Op::Var || e.op() == Op::Int) {
    return Sort::Int;
  }
  if (e.op() == Op::Bool) {
    return Sort::Bool;
  }
  for (const Expr& c : e.children()) {
    if (sort_check(c) != operand_sort(e.op())) {
      throw SortError("operand of '" + std::string(op_symbol(e.op())) + "' has the wrong sort in " +
                      print_sexpr(e));
    }
  }
  return result_sort(e.op());
}

Value evaluate(const Expr& e, const Assignment& a) {
  switch (e.op()) {
    case Op::Var: {
      auto it = a.find(e.name());
      if (it == a.end()) {
        throw EvalError("unbound variable '" + e.name() + "'");
      }
      return it->second;
    }
    case Op::Int:
      return e.int_value();
    case Op::Bool:
      return e.bool_value();
    default:
      break;
  }
  if (e.num_children() == 1) {
    Value arg = evaluate(e.child(0), a);
    return apply_op(e.op(), std::span<const Value>(&arg, 1));
  }
  Value args[2] = {evaluate(e.child(0), a), evaluate(e.child(1), a)};
  return apply_op(e.op(), args);
}

std::size_t ast_size(const Expr& e) {
  std::size_t n = 1;
  for (const Expr& c : e.children()) {
    n += ast_size(c);
  }
  return n;
}

std::size_t ast_depth(const Expr& e) {
  std::size_t d = 0;
  for (const Expr& c : e.children()) {
    d = std::max(d, ast_depth(c));
  }
  return d + 1;
}

std::vector<std::string> free_vars(const Expr& e) {
  std::vector<std::string> out;
  std::set<std::string, std::less<>> seen;
  auto walk = [&](auto&& self, const Expr& x) -> void {
    if (x.op() == Op::Var) {
      if (seen.insert(x.name()).second) {
        out.push_back(x.name());
      }
      return;
    }
    for (const Expr& c : x.children()) {
      self(self, c);
    }
  };
  walk(walk, e);
  return out;
}

// ---------------------------------------------------------------------------
// Infix syntax

namespace {

enum class Tok { Int, Ident, Punct, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t offset;
};

std::vector<Token> tokenize(std::string_view s) {
  static constexpr std::string_view kTwoChar[] = {"<=", ">=", "==", "!=", "&&", "||"};
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
        ++i;
      }
      out.push_back({Tok::Int, std::string(s.substr(start, i - start)), start});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) {
        ++i;
      }
      out.push_back({Tok::Ident, std::string(s.substr(start, i - start)), start});
      continue;
    }
    if (i + 1 < s.size()) {
      std::string_view two = s.substr(i, 2);
      if (std::find(std::begin(kTwoChar), std::end(kTwoChar), two) != std::end(kTwoChar)) {
        out.push_back({Tok::Punct, std::string(two), start});
        i += 2;
        continue;
      }
    }
    if (std::string_view("+-*/%<>!(),").find(c) != std::string_view::npos) {
      out.push_back({Tok::Punct, std::string(1, c), start});
      ++i;
      continue;
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", start);
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

class InfixParser {
public:
  explicit InfixParser(std::string_view text) : toks_(tokenize(text)) {}

  Expr parse() {
    auto [e, off] = parse_or();
    if (peek().kind != Tok::End) {
      throw SyntaxError("unexpected '" + peek().text + "'", peek().offset);
    }
    (void)off;
    return e;
  }

private:
  struct Located {
    Expr expr;
    std::size_t offset;
  };

  const Token& peek() const { return toks_[pos_]; }
  bool is_punct(std::string_view p) const {
    return peek().kind == Tok::Punct && peek().text == p;
  }
  void expect(std::string_view p) {
    if (!is_punct(p)) {
      throw SyntaxError("expected '" + std::string(p) + "'", peek().offset);
    }
    ++pos_;
  }

  static void require(const Located& x, Sort want, std::size_t op_offset, Op op) {
    if (sort_check(x.expr) != want) {
      throw SortError("sort error at offset " + std::to_string(x.offset) + ": operand of '" +
                      std::string(op_symbol(op)) + "' (offset " + std::to_string(op_offset) +
                      ") must be " + (want == Sort::Int ? "integer" : "boolean"));
    }
  }

  Located combine(Op op, Located lhs, Located rhs, std::size_t op_offset) {
    require(lhs, operand_sort(op), op_offset, op);
    require(rhs, operand_sort(op), op_offset, op);
    return {Expr::binary(op, std::move(lhs.expr), std::move(rhs.expr)), lhs.offset};
  }

  Located parse_or() {
    Located lhs = parse_and();
    while (is_punct("||")) {
      std::size_t off = peek().offset;
      ++pos_;
      lhs = combine(Op::Or, std::move(lhs), parse_and(), off);
    }
    return lhs;
  }

  Located parse_and() {
    Located lhs = parse_not();
    while (is_punct("&&")) {
      std::size_t off = peek().offset;
      ++pos_;
      lhs = combine(Op::And, std::move(lhs), parse_not(), off);
    }
    return lhs;
  }

  Located parse_not() {
    if (is_punct("!")) {
      std::size_t off = peek().offset;
      ++pos_;
      Located inner = parse_not();
      require(inner, Sort::Bool, off, Op::Not);
      return {Expr::unary(Op::Not, std::move(inner.expr)), off};
    }
    return parse_cmp();
  }

  Located parse_cmp() {
    Located lhs = parse_sum();
    static constexpr std::pair<std::string_view, Op> kCmp[] = {
        {"<", Op::Lt}, {"<=", Op::Le}, {">", Op::Gt}, {">=", Op::Ge}, {"==", Op::Eq}, {"!=", Op::Ne}};
    for (auto [sym, op] : kCmp) {
      if (is_punct(sym)) {
        std::size_t off = peek().offset;
        ++pos_;
        Located out = combine(op, std::move(lhs), parse_sum(), off);
        for (auto [sym2, op2] : kCmp) {
          (void)op2;
          if (is_punct(sym2)) {
            throw SyntaxError("comparisons do not chain", peek().offset);
          }
        }
        return out;
      }
    }
    return lhs;
  }

  Located parse_sum() {
    Located lhs = parse_term();
    while (is_punct("+") || is_punct("-")) {
      Op op = is_punct("+") ? Op::Add : Op::Sub;
      std::size_t off = peek().offset;
      ++pos_;
      lhs = combine(op, std::move(lhs), parse_term(), off);
    }
    return lhs;
  }

  Located parse_term() {
    Located lhs = parse_unary();
    while (is_punct("*") || is_punct("/") || is_punct("%")) {
      Op op = is_punct("*") ? Op::Mul : is_punct("/") ? Op::Div : Op::Mod;
      std::size_t off = peek().offset;
      ++pos_;
      lhs = combine(op, std::move(lhs), parse_unary(), off);
    }
    return lhs;
  }

  Located parse_unary() {
    if (is_punct("-")) {
      std::size_t off = peek().offset;
      ++pos_;
      if (peek().kind == Tok::Int) {
        Integer v(peek().text);
        ++pos_;
        return {Expr::integer(-v), off};
      }
      Located inner = parse_unary();
      require(inner, Sort::Int, off, Op::Neg);
      return {Expr::unary(Op::Neg, std::move(inner.expr)), off};
    }
    if (is_punct("!")) {
      // `!` binds looser than comparisons; reaching it here means something
      // like `a + !b`, which can never be well-sorted.
      throw SortError("sort error at offset " + std::to_string(peek().offset) +
                      ": '!' applied inside an arithmetic context");
    }
    return parse_atom();
  }

  Located parse_atom() {
    const Token& t = peek();
    std::size_t off = t.offset;
    if (t.kind == Tok::Int) {
      ++pos_;
      return {Expr::integer(Integer(t.text)), off};
    }
    if (t.kind == Tok::Ident) {
      std::string name = t.text;
      ++pos_;
      if (name == "true" || name == "false") {
        return {Expr::boolean(name == "true"), off};
      }
      if ((name == "min" || name == "max") && is_punct("(")) {
        Op op = name == "min" ? Op::Min : Op::Max;
        ++pos_;
        Located a = parse_or();
        expect(",");
        Located b = parse_or();
        expect(")");
        Located out = combine(op, std::move(a), std::move(b), off);
        out.offset = off;
        return out;
      }
      return {Expr::var(std::move(name)), off};
    }
    if (is_punct("(")) {
      ++pos_;
      Located inner = parse_or();
      expect(")");
      inner.offset = off;
      return inner;
    }
    if (t.kind == Tok::End) {
      throw SyntaxError("unexpected end of input", off);
    }
    throw SyntaxError("unexpected '" + t.text + "'", off);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// Binding strength used by the printer; larger binds tighter.
int precedence(Op op) {
  switch (op) {
    case Op::Or: return 1;
    case Op::And: return 2;
    case Op::Not: return 3;
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge:
    case Op::Eq:
    case Op::Ne: return 4;
    case Op::Add:
    case Op::Sub: return 5;
    case Op::Mul:
    case Op::Div:
    case Op::Mod: return 6;
    case Op::Neg: return 7;
    default: return 8;
  }
}

void print_infix_to(std::ostream& os, const Expr& e) {
  auto child = [&](const Expr& c, bool paren) {
    if (paren) os << '(';
    print_infix_to(os, c);
    if (paren) os << ')';
  };
  switch (e.op()) {
    case Op::Var: os << e.name(); return;
    case Op::Int: os << e.int_value().str(); return;
    case Op::Bool: os << (e.bool_value() ? "true" : "false"); return;
    case Op::Neg:
      os << '-';
      child(e.child(0), e.child(0).op() == Op::Int || precedence(e.child(0).op()) < 7);
      return;
    case Op::Not:
      os << '!';
      child(e.child(0), precedence(e.child(0).op()) < 3);
      return;
    case Op::Min:
    case Op::Max:
      os << op_symbol(e.op()) << '(';
      print_infix_to(os, e.child(0));
      os << ", ";
      print_infix_to(os, e.child(1));
      os << ')';
      return;
    default: break;
  }
  int p = precedence(e.op());
  bool comparison = p == 4;
  int lp = precedence(e.child(0).op());
  int rp = precedence(e.child(1).op());
  child(e.child(0), comparison ? lp <= p : lp < p);
  os << ' ' << op_symbol(e.op()) << ' ';
  child(e.child(1), rp <= p);
}

}  // namespace

Op parse_op_symbol(std::string_view sym, std::size_t argc, std::size_t offset) {
  static const std::pair<std::string_view, Op> kOps[] = {
      {"+", Op::Add}, {"*", Op::Mul}, {"/", Op::Div}, {"%", Op::Mod}, {"min", Op::Min},
      {"max", Op::Max}, {"<", Op::Lt}, {"<=", Op::Le}, {">", Op::Gt}, {">=", Op::Ge},
      {"==", Op::Eq}, {"!=", Op::Ne}, {"&&", Op::And}, {"||", Op::Or}, {"!", Op::Not}};
  if (sym == "-") {
    if (argc == 1) return Op::Neg;
    if (argc == 2) return Op::Sub;
    throw SyntaxError("arity error: '-' takes one or two operands", offset);
  }
  for (auto [s, op] : kOps) {
    if (s == sym) {
      if (arity(op) != argc) {
        throw SyntaxError("arity error: '" + std::string(sym) + "' takes " +
                              std::to_string(arity(op)) + " operand(s)",
                          offset);
      }
      return op;
    }
  }
  throw SyntaxError("unknown operator '" + std::string(sym) + "'", offset);
}

bool is_int_atom(std::string_view s) {
  std::size_t i = (s.size() > 1 && s[0] == '-') ? 1 : 0;
  if (i >= s.size()) return false;
  return std::all_of(s.begin() + static_cast<std::ptrdiff_t>(i), s.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

bool is_ident(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

namespace {

Expr from_sexpr(const sexpr::Node& n) {
  if (!n.is_list) {
    if (n.atom == "true" || n.atom == "false") return Expr::boolean(n.atom == "true");
    if (is_int_atom(n.atom)) return Expr::integer(Integer(n.atom));
    if (is_ident(n.atom)) return Expr::var(n.atom);
    throw SyntaxError("bad atom '" + n.atom + "'", n.offset);
  }
  if (n.items.empty() || n.items[0].is_list) {
    throw SyntaxError("expected an operator symbol", n.offset);
  }
  Op op = parse_op_symbol(n.items[0].atom, n.items.size() - 1, n.offset);
  std::vector<Expr> kids;
  for (std::size_t i = 1; i < n.items.size(); ++i) {
    kids.push_back(from_sexpr(n.items[i]));
  }
  return Expr::make(op, std::move(kids));
}

void print_sexpr_to(std::ostream& os, const Expr& e) {
  switch (e.op()) {
    case Op::Var: os << e.name(); return;
    case Op::Int: os << e.int_value().str(); return;
    case Op::Bool: os << (e.bool_value() ? "true" : "false"); return;
    default: break;
  }
  os << '(' << op_symbol(e.op());
  for (const Expr& c : e.children()) {
    os << ' ';
    print_sexpr_to(os, c);
  }
  os << ')';
}

}  // namespace

Expr parse_infix(std::string_view text) { return InfixParser(text).parse(); }

std::string print_infix(const Expr& e) {
  std::ostringstream os;
  print_infix_to(os, e);
  return os.str();
}

Expr parse_sexpr(std::string_view text) {
  Expr e = from_sexpr(sexpr::read_one(text));
  sort_check(e);
  return e;
}

std::string print_sexpr(const Expr& e) {
  std::ostringstream os;
  print_sexpr_to(os, e);
  return os.str();
}

}  // namespace eqprove
