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

#ifndef EQPROVE_EXPR_HPP
#define EQPROVE_EXPR_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace eqprove {

using Integer = boost::multiprecision::cpp_int;

/// Operator alphabet shared by expressions, e-nodes and patterns. The
/// declaration order is the operator ordinal used for deterministic
/// tie-breaking during extraction.
enum class Op : std::uint8_t {
  Var,
  Int,
  Bool,
  Neg,
  Not,
  Add,
  Sub,
  Mul,
  Div,
  Mod,
  Min,
  Max,
  Lt,
  Le,
  Gt,
  Ge,
  Eq,
  Ne,
  And,
  Or,
};

inline constexpr std::size_t kNumOps = static_cast<std::size_t>(Op::Or) + 1;

enum class Sort : std::uint8_t { Int, Bool };

std::size_t arity(Op op);
bool is_leaf(Op op);
/// Sort produced by `op`.
Sort result_sort(Op op);
/// Sort expected for the operands of `op` (meaningless for leaves).
Sort operand_sort(Op op);
/// S-expression symbol; Neg and Sub share "-" and are told apart by arity.
std::string_view op_symbol(Op op);

/// Base class for every diagnostic raised by the library.
class Error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
public:
  SyntaxError(const std::string& msg, std::size_t offset);
  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

class SortError : public Error {
  using Error::Error;
};

class EvalError : public Error {
  using Error::Error;
};

/// Ground value: an arbitrary-precision integer or a boolean.
using Value = std::variant<Integer, bool>;

std::string to_string(const Value& v);
Sort sort_of(const Value& v);

/// Floor division and the matching remainder. Division by zero yields 0.
Integer floor_div(const Integer& a, const Integer& b);
Integer floor_mod(const Integer& a, const Integer& b);

/// Applies a non-leaf operator to already-evaluated operands. Throws
/// EvalError on operand sort mismatch.
Value apply_op(Op op, std::span<const Value> args);

/// Immutable expression tree with structural equality. Copies share nodes.
class Expr {
public:
  static Expr var(std::string name);
  static Expr integer(Integer value);
  static Expr boolean(bool value);
  static Expr unary(Op op, Expr child);
  static Expr binary(Op op, Expr lhs, Expr rhs);
  /// Builds a node of any arity; `children.size()` must equal arity(op).
  static Expr make(Op op, std::vector<Expr> children);

  Op op() const { return node_->op; }
  std::size_t num_children() const { return node_->children.size(); }
  const Expr& child(std::size_t i) const { return node_->children[i]; }
  const std::vector<Expr>& children() const { return node_->children; }

  const std::string& name() const;
  const Integer& int_value() const;
  bool bool_value() const;

  /// Leaf value for Int/Bool nodes.
  Value literal() const;

  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator<(const Expr& a, const Expr& b);

private:
  struct Node {
    Op op;
    std::variant<std::monostate, std::string, Integer, bool> leaf;
    std::vector<Expr> children;
  };

  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

using Assignment = std::map<std::string, Integer, std::less<>>;

/// Static sort of `e`. Variables are integer-sorted.
Sort sort_check(const Expr& e);

/// Total evaluator: floor division, x/0 = 0 and x%0 = 0.
Value evaluate(const Expr& e, const Assignment& a);

std::size_t ast_size(const Expr& e);
std::size_t ast_depth(const Expr& e);

/// Free variables in first-occurrence order.
std::vector<std::string> free_vars(const Expr& e);

Expr parse_infix(std::string_view text);
std::string print_infix(const Expr& e);

/// Operator for an s-expression head symbol applied to `argc` operands.
/// Throws SyntaxError (arity or unknown symbol) tagged with `offset`.
Op parse_op_symbol(std::string_view sym, std::size_t argc, std::size_t offset);
bool is_int_atom(std::string_view s);
bool is_ident(std::string_view s);

Expr parse_sexpr(std::string_view text);
std::string print_sexpr(const Expr& e);

}  // namespace eqprove

#endif  // EQPROVE_EXPR_HPP
