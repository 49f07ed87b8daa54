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

#include "eqprove/egraph.hpp"

#include <algorithm>
#include <sstream>

namespace eqprove {

namespace analysis {

ConstDatum make(Op op, std::span<const ConstDatum> child_data) {
  if (is_leaf(op) || child_data.size() != arity(op)) {
    return std::nullopt;
  }
  Value args[2];
  for (std::size_t i = 0; i < child_data.size(); ++i) {
    if (!child_data[i]) {
      return std::nullopt;
    }
    args[i] = *child_data[i];
  }
  return apply_op(op, std::span<const Value>(args, child_data.size()));
}

ConstDatum join(const ConstDatum& a, const ConstDatum& b) {
  if (!a) return b;
  if (!b) return a;
  if (*a != *b) {
    throw ConstantContradiction(
        "constant contradiction: merging classes with values " + to_string(*a) + " and " +
            to_string(*b),
        0, 0);
  }
  return a;
}

}  // namespace analysis

namespace {

// Union-find storage is logically const during lookups; path compression is
// an implementation detail.
EClassId find_root(std::vector<EClassId>& parent, EClassId id) {
  EClassId root = id;
  while (parent[root] != root) {
    root = parent[root];
  }
  while (parent[id] != root) {
    EClassId next = parent[id];
    parent[id] = root;
    id = next;
  }
  return root;
}

}  // namespace

EClassId EGraph::find(EClassId id) const {
  while (parent_[id] != id) {
    id = parent_[id];
  }
  return id;
}

EClassId EGraph::find_mut(EClassId id) { return find_root(parent_, id); }

ENode EGraph::canonicalize(ENode n) const {
  for (std::size_t i = 0; i < n.num_kids(); ++i) {
    n.kids[i] = find(n.kids[i]);
  }
  return n;
}

std::optional<std::uint32_t> EGraph::find_symbol(std::string_view name) const {
  auto it = symbol_ids_.find(name);
  if (it == symbol_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> EGraph::find_integer(const Integer& v) const {
  auto it = integer_ids_.find(v);
  if (it == integer_ids_.end()) return std::nullopt;
  return it->second;
}

ENode EGraph::intern_leaf(Op op, const Value* v, std::string_view name) {
  ENode n;
  n.op = op;
  if (op == Op::Var) {
    auto it = symbol_ids_.find(name);
    if (it == symbol_ids_.end()) {
      it = symbol_ids_.emplace(std::string(name), static_cast<std::uint32_t>(symbols_.size())).first;
      symbols_.emplace_back(name);
    }
    n.payload = it->second;
  } else if (op == Op::Int) {
    const Integer& i = std::get<Integer>(*v);
    auto it = integer_ids_.find(i);
    if (it == integer_ids_.end()) {
      it = integer_ids_.emplace(i, static_cast<std::uint32_t>(integers_.size())).first;
      integers_.push_back(i);
    }
    n.payload = it->second;
  } else {
    n.payload = std::get<bool>(*v) ? 1 : 0;
  }
  return n;
}

EClassId EGraph::add_var(std::string_view name) { return add(intern_leaf(Op::Var, nullptr, name)); }

EClassId EGraph::add_int(const Integer& v) {
  Value val(v);
  return add(intern_leaf(Op::Int, &val, {}));
}

EClassId EGraph::add_bool(bool v) {
  Value val(v);
  return add(intern_leaf(Op::Bool, &val, {}));
}

EClassId EGraph::add_expr(const Expr& e) {
  switch (e.op()) {
    case Op::Var: return add_var(e.name());
    case Op::Int: return add_int(e.int_value());
    case Op::Bool: return add_bool(e.bool_value());
    default: break;
  }
  ENode n;
  n.op = e.op();
  for (std::size_t i = 0; i < e.num_children(); ++i) {
    n.kids[i] = add_expr(e.child(i));
  }
  return add(n);
}

std::optional<EClassId> EGraph::lookup(ENode n) const {
  auto it = memo_.find(canonicalize(n));
  if (it == memo_.end()) return std::nullopt;
  return find(it->second);
}

std::optional<EClassId> EGraph::lookup_expr(const Expr& e) const {
  ENode n;
  n.op = e.op();
  switch (e.op()) {
    case Op::Var: {
      auto p = find_symbol(e.name());
      if (!p) return std::nullopt;
      n.payload = *p;
      break;
    }
    case Op::Int: {
      auto p = find_integer(e.int_value());
      if (!p) return std::nullopt;
      n.payload = *p;
      break;
    }
    case Op::Bool:
      n.payload = e.bool_value() ? 1 : 0;
      break;
    default:
      for (std::size_t i = 0; i < e.num_children(); ++i) {
        auto c = lookup_expr(e.child(i));
        if (!c) return std::nullopt;
        n.kids[i] = *c;
      }
      break;
  }
  return lookup(n);
}

std::optional<Value> EGraph::leaf_value(const ENode& n) const {
  if (n.op == Op::Int) return Value(integers_[n.payload]);
  if (n.op == Op::Bool) return Value(n.payload != 0);
  return std::nullopt;
}

int EGraph::compare_leaves(const ENode& a, const ENode& b) const {
  if (a.op != b.op) return a.op < b.op ? -1 : 1;
  switch (a.op) {
    case Op::Var: {
      int c = symbols_[a.payload].compare(symbols_[b.payload]);
      return c < 0 ? -1 : (c == 0 ? 0 : 1);
    }
    case Op::Int: {
      const Integer& x = integers_[a.payload];
      const Integer& y = integers_[b.payload];
      return x < y ? -1 : (x == y ? 0 : 1);
    }
    default:
      return a.payload < b.payload ? -1 : (a.payload == b.payload ? 0 : 1);
  }
}

ConstDatum EGraph::make_datum(const ENode& n) const {
  if (n.op == Op::Var) return std::nullopt;
  if (is_leaf(n.op)) return leaf_value(n);
  ConstDatum kids[2];
  for (std::size_t i = 0; i < n.num_kids(); ++i) {
    kids[i] = classes_[find(n.kids[i])].data;
  }
  return analysis::make(n.op, std::span<const ConstDatum>(kids, n.num_kids()));
}

EClassId EGraph::add(ENode n) {
  if (n.op == Op::Bool) n.payload = n.payload ? 1 : 0;
  for (std::size_t i = 0; i < n.num_kids(); ++i) {
    n.kids[i] = find_mut(n.kids[i]);
  }
  for (std::size_t i = n.num_kids(); i < 2; ++i) n.kids[i] = 0;
  if (auto it = memo_.find(n); it != memo_.end()) {
    return find_mut(it->second);
  }
  auto id = static_cast<EClassId>(parent_.size());
  parent_.push_back(id);
  classes_.emplace_back();
  EClass& cls = classes_.back();
  cls.nodes.push_back(n);
  cls.has_var = n.op == Op::Var;
  for (std::size_t i = 0; i < n.num_kids(); ++i) {
    classes_[n.kids[i]].parents.emplace_back(n, id);
  }
  memo_.emplace(n, id);
  ++num_canonical_;
  ++num_nodes_;
  classes_[id].data = make_datum(n);
  modify(id);
  return find_mut(id);
}

void EGraph::modify(EClassId id) {
  id = find_mut(id);
  const ConstDatum& d = classes_[id].data;
  if (!d) return;
  for (const ENode& n : classes_[id].nodes) {
    if (n.op == Op::Int || n.op == Op::Bool) return;
  }
  Value v = *d;
  ENode lit = intern_leaf(std::holds_alternative<bool>(v) ? Op::Bool : Op::Int, &v, {});
  if (auto it = memo_.find(lit); it != memo_.end()) {
    merge(id, it->second);
    return;
  }
  classes_[id].nodes.push_back(lit);
  memo_.emplace(lit, id);
  ++num_nodes_;
}

EClassId EGraph::merge(EClassId a, EClassId b) {
  a = find_mut(a);
  b = find_mut(b);
  if (a == b) return a;
  EClassId root = std::min(a, b);
  EClassId other = std::max(a, b);
  EClass& r = classes_[root];
  EClass& o = classes_[other];
  if (r.data && o.data && *r.data != *o.data) {
    throw ConstantContradiction("constant contradiction: merging class " + std::to_string(root) +
                                    " (= " + to_string(*r.data) + ") with class " +
                                    std::to_string(other) + " (= " + to_string(*o.data) + ")",
                                root, other);
  }
  if (!r.data) r.data = o.data;
  parent_[other] = root;
  --num_canonical_;
  ++num_unions_;
  if (o.nodes.size() > r.nodes.size()) std::swap(r.nodes, o.nodes);
  r.nodes.insert(r.nodes.end(), o.nodes.begin(), o.nodes.end());
  if (o.parents.size() > r.parents.size()) std::swap(r.parents, o.parents);
  r.parents.insert(r.parents.end(), o.parents.begin(), o.parents.end());
  r.has_var = r.has_var || o.has_var;
  o = EClass{};
  pending_.push_back(root);
  modify(root);
  return find_mut(root);
}

void EGraph::repair(EClassId id) {
  id = find_mut(id);
  std::vector<std::pair<ENode, EClassId>> parents = std::move(classes_[id].parents);
  classes_[id].parents.clear();

  for (auto& [node, cls] : parents) {
    memo_.erase(node);
    node = canonicalize(node);
    memo_[node] = find_mut(cls);
  }

  std::unordered_map<ENode, EClassId, ENodeHash> seen;
  seen.reserve(parents.size());
  std::vector<std::pair<ENode, EClassId>> deduped;
  deduped.reserve(parents.size());
  for (auto& [node, cls] : parents) {
    ENode canon = canonicalize(node);
    auto [it, inserted] = seen.emplace(canon, find_mut(cls));
    if (!inserted) {
      EClassId merged = merge(cls, it->second);
      it->second = merged;
      memo_[canon] = merged;
    } else {
      deduped.emplace_back(canon, cls);
    }
  }

  for (auto& [node, cls] : deduped) {
    cls = find_mut(cls);
    node = canonicalize(node);
    ConstDatum d = make_datum(node);
    if (!d) continue;
    EClass& target = classes_[cls];
    if (target.data) {
      if (*target.data != *d) {
        throw ConstantContradiction("constant contradiction: class " + std::to_string(cls) +
                                        " holds " + to_string(*target.data) +
                                        " but a member folds to " + to_string(*d),
                                    cls, cls);
      }
      continue;
    }
    target.data = std::move(d);
    modify(cls);
    pending_.push_back(find_mut(cls));
  }

  auto& dest = classes_[find_mut(id)].parents;
  dest.insert(dest.end(), deduped.begin(), deduped.end());
}

void EGraph::rebuild() {
  while (!pending_.empty()) {
    std::vector<EClassId> todo = std::move(pending_);
    pending_.clear();
    for (EClassId& c : todo) c = find_mut(c);
    std::sort(todo.begin(), todo.end());
    todo.erase(std::unique(todo.begin(), todo.end()), todo.end());
    for (EClassId c : todo) {
      repair(c);
    }
  }

  num_nodes_ = 0;
  for (EClassId id = 0; id < classes_.size(); ++id) {
    if (parent_[id] != id) continue;
    auto& nodes = classes_[id].nodes;
    for (ENode& n : nodes) n = canonicalize(n);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    num_nodes_ += nodes.size();
  }
}

std::vector<EClassId> EGraph::class_ids() const {
  std::vector<EClassId> out;
  out.reserve(num_canonical_);
  for (EClassId id = 0; id < parent_.size(); ++id) {
    if (parent_[id] == id) out.push_back(id);
  }
  return out;
}

std::string EGraph::dump() const {
  std::ostringstream os;
  for (EClassId id : class_ids()) {
    const EClass& c = classes_[id];
    os << 'c' << id;
    if (c.data) os << " = " << to_string(*c.data);
    os << ':';
    std::vector<ENode> nodes = c.nodes;
    for (ENode& n : nodes) n = canonicalize(n);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    for (const ENode& n : nodes) {
      os << ' ';
      switch (n.op) {
        case Op::Var: os << symbols_[n.payload]; break;
        case Op::Int: os << integers_[n.payload].str(); break;
        case Op::Bool: os << (n.payload ? "true" : "false"); break;
        default:
          os << '(' << op_symbol(n.op);
          for (std::size_t i = 0; i < n.num_kids(); ++i) os << " c" << n.kids[i];
          os << ')';
      }
    }
    os << '\n';
  }
  return os.str();
}

std::pair<EGraph, EClassId> from_expr(const Expr& e) {
  EGraph g;
  EClassId root = g.add_expr(e);
  g.rebuild();
  root = g.find(root);
  return {std::move(g), root};
}

}  // namespace eqprove
