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

#ifndef EQPROVE_EGRAPH_HPP
#define EQPROVE_EGRAPH_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "eqprove/expr.hpp"

namespace eqprove {

using EClassId = std::uint32_t;

/// Function symbol (or leaf) whose children are e-classes. Leaves carry a
/// payload: an index into the owning graph's symbol or integer table for
/// Var/Int, and 0/1 for Bool.
struct ENode {
  Op op = Op::Var;
  std::uint32_t payload = 0;
  std::array<EClassId, 2> kids{0, 0};

  std::size_t num_kids() const { return arity(op); }

  friend bool operator==(const ENode& a, const ENode& b) {
    return a.op == b.op && a.payload == b.payload && a.kids == b.kids;
  }
  friend bool operator<(const ENode& a, const ENode& b) {
    if (a.op != b.op) return a.op < b.op;
    if (a.payload != b.payload) return a.payload < b.payload;
    return a.kids < b.kids;
  }
};

struct ENodeHash {
  std::size_t operator()(const ENode& n) const {
    std::uint64_t h = static_cast<std::uint64_t>(n.op) * 0x9E3779B97F4A7C15ull;
    h ^= (static_cast<std::uint64_t>(n.payload) + 0x7F4A7C15ull) * 0xBF58476D1CE4E5B9ull;
    h ^= (static_cast<std::uint64_t>(n.kids[0]) << 32 | n.kids[1]) * 0x94D049BB133111EBull;
    return static_cast<std::size_t>(h ^ (h >> 31));
  }
};

/// Raised when a union would equate two classes carrying distinct constant
/// values. With a sound ruleset this is unreachable.
class ConstantContradiction : public Error {
public:
  ConstantContradiction(const std::string& what, EClassId a, EClassId b)
      : Error(what), a_(a), b_(b) {}
  EClassId first() const { return a_; }
  EClassId second() const { return b_; }

private:
  EClassId a_;
  EClassId b_;
};

/// Per-class constant datum.
using ConstDatum = std::optional<Value>;

namespace analysis {

/// Folds an operator over its children's data; absent unless every child is
/// constant. Leaves yield their literal value (variables yield absent).
ConstDatum make(Op op, std::span<const ConstDatum> child_data);

/// Lattice join. Throws ConstantContradiction on distinct constants.
ConstDatum join(const ConstDatum& a, const ConstDatum& b);

}  // namespace analysis

struct EClass {
  std::vector<ENode> nodes;
  std::vector<std::pair<ENode, EClassId>> parents;
  ConstDatum data;
  bool has_var = false;
};

/// Hashconsed e-graph with union-find and deferred congruence repair.
///
/// Mutations (add, merge) leave the graph in a state where lookups through
/// find() are correct but congruence may be violated; rebuild() restores the
/// hashcons and congruence invariants. Canonical ids are the smallest id of
/// each equivalence class.
class EGraph {
public:
  EGraph() = default;

  /// Adds `n` (children canonicalized first) and returns its class.
  EClassId add(ENode n);
  EClassId add_var(std::string_view name);
  EClassId add_int(const Integer& v);
  EClassId add_bool(bool v);
  /// Adds every subterm of `e`.
  EClassId add_expr(const Expr& e);

  /// Class of `e` if every subterm is already present; never mutates.
  std::optional<EClassId> lookup_expr(const Expr& e) const;
  std::optional<EClassId> lookup(ENode n) const;

  EClassId find(EClassId id) const;
  /// Mutating find with path compression.
  EClassId find_mut(EClassId id);

  /// Unions the classes of `a` and `b`; returns the canonical id. Joins
  /// constant data and queues repair work for rebuild().
  EClassId merge(EClassId a, EClassId b);

  void rebuild();

  bool is_clean() const { return pending_.empty(); }

  ENode canonicalize(ENode n) const;

  const EClass& eclass(EClassId id) const { return classes_[find(id)]; }
  const ConstDatum& data(EClassId id) const { return classes_[find(id)].data; }

  /// Canonical class ids in ascending order.
  std::vector<EClassId> class_ids() const;
  std::size_t num_classes() const { return num_canonical_; }
  /// Distinct canonical e-nodes; exact after rebuild().
  std::size_t num_nodes() const { return num_nodes_; }
  /// Ids ever allocated (canonical or not).
  std::size_t num_ids() const { return parent_.size(); }
  /// Unions that actually merged two distinct classes.
  std::size_t num_unions() const { return num_unions_; }

  const std::string& symbol(std::uint32_t payload) const { return symbols_[payload]; }
  const Integer& integer(std::uint32_t payload) const { return integers_[payload]; }
  /// Value of a literal node; nullopt for variables and operators.
  std::optional<Value> leaf_value(const ENode& n) const;
  /// Orders two leaves by their value (names, integers or booleans), not by
  /// interning order.
  int compare_leaves(const ENode& a, const ENode& b) const;

  /// Deterministic textual dump, canonical ids ascending.
  std::string dump() const;

private:
  ENode intern_leaf(Op op, const Value* v, std::string_view name);
  std::optional<std::uint32_t> find_symbol(std::string_view name) const;
  std::optional<std::uint32_t> find_integer(const Integer& v) const;
  ConstDatum make_datum(const ENode& n) const;
  void modify(EClassId id);
  void repair(EClassId id);

  std::vector<EClassId> parent_;
  std::vector<EClass> classes_;
  std::unordered_map<ENode, EClassId, ENodeHash> memo_;
  std::vector<EClassId> pending_;

  std::vector<std::string> symbols_;
  std::map<std::string, std::uint32_t, std::less<>> symbol_ids_;
  std::vector<Integer> integers_;
  std::map<Integer, std::uint32_t> integer_ids_;

  std::size_t num_canonical_ = 0;
  std::size_t num_nodes_ = 0;
  std::size_t num_unions_ = 0;
};

/// Builds a fresh graph holding `e` and returns it with the root class.
std::pair<EGraph, EClassId> from_expr(const Expr& e);

}  // namespace eqprove

#endif  // EQPROVE_EGRAPH_HPP
