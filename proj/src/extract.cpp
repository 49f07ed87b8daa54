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

#include "eqprove/extract.hpp"

#include <algorithm>
#include <map>

namespace eqprove {

namespace {

Cost node_cost(const EGraph& g, const ENode& n, CostModel cm, const std::vector<Cost>& cost) {
  Cost acc = 0;
  for (std::size_t i = 0; i < n.num_kids(); ++i) {
    Cost k = cost[g.find(n.kids[i])];
    if (k == kInfiniteCost) return kInfiniteCost;
    if (cm == CostModel::AstSize) {
      acc = (acc > kInfiniteCost - 1 - k) ? kInfiniteCost - 1 : acc + k;
    } else {
      acc = std::max(acc, k);
    }
  }
  return acc >= kInfiniteCost - 1 ? kInfiniteCost - 1 : acc + 1;
}

}  // namespace

Extractor::Extractor(const EGraph& g, CostModel cm)
    : g_(g),
      cm_(cm),
      cost_(g.num_ids(), kInfiniteCost),
      choice_(g.num_ids(), 0),
      memo_(g.num_ids()) {
  const std::vector<EClassId> ids = g.class_ids();

  for (bool changed = true; changed;) {
    changed = false;
    for (EClassId c : ids) {
      for (const ENode& n : g.eclass(c).nodes) {
        Cost k = node_cost(g, n, cm, cost_);
        if (k < cost_[c]) {
          cost_[c] = k;
          changed = true;
        }
      }
    }
  }

  // Rank classes by (cost, chosen node key). Children always cost strictly
  // less than their parent, so their ranks are final when a level is sorted.
  std::vector<std::uint32_t> rank(g.num_ids(), 0);
  auto compare = [&](const ENode& a, const ENode& b) {
    if (a.op != b.op) return a.op < b.op ? -1 : 1;
    if (is_leaf(a.op)) return g.compare_leaves(a, b);
    for (std::size_t i = 0; i < a.num_kids(); ++i) {
      std::uint32_t ra = rank[g.find(a.kids[i])];
      std::uint32_t rb = rank[g.find(b.kids[i])];
      if (ra != rb) return ra < rb ? -1 : 1;
    }
    return 0;
  };

  std::vector<EClassId> order;
  for (EClassId c : ids) {
    if (cost_[c] != kInfiniteCost) order.push_back(c);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](EClassId a, EClassId b) { return cost_[a] < cost_[b]; });

  std::uint32_t next_rank = 0;
  for (std::size_t lo = 0; lo < order.size();) {
    std::size_t hi = lo;
    while (hi < order.size() && cost_[order[hi]] == cost_[order[lo]]) ++hi;
    for (std::size_t i = lo; i < hi; ++i) {
      EClassId c = order[i];
      const auto& nodes = g.eclass(c).nodes;
      std::optional<std::uint32_t> best;
      for (std::uint32_t j = 0; j < nodes.size(); ++j) {
        if (node_cost(g, nodes[j], cm, cost_) != cost_[c]) continue;
        if (!best || compare(nodes[j], nodes[*best]) < 0) best = j;
      }
      choice_[c] = *best;
    }
    std::sort(order.begin() + lo, order.begin() + hi, [&](EClassId a, EClassId b) {
      return compare(chosen(a), chosen(b)) < 0;
    });
    for (std::size_t i = lo; i < hi; ++i) {
      if (i > lo && compare(chosen(order[i - 1]), chosen(order[i])) != 0) ++next_rank;
      rank[order[i]] = next_rank;
    }
    ++next_rank;
    lo = hi;
  }
}

const ENode& Extractor::chosen(EClassId c) const {
  c = g_.find(c);
  return g_.eclass(c).nodes[choice_[c]];
}

Expr Extractor::best(EClassId c) {
  c = g_.find(c);
  if (cost_[c] == kInfiniteCost) {
    throw Error("extraction: class " + std::to_string(c) + " has no finite term");
  }
  if (memo_[c]) return *memo_[c];
  const ENode& n = chosen(c);
  Expr e = Expr::var("_");
  switch (n.op) {
    case Op::Var: e = Expr::var(g_.symbol(n.payload)); break;
    case Op::Int: e = Expr::integer(g_.integer(n.payload)); break;
    case Op::Bool: e = Expr::boolean(n.payload != 0); break;
    default: {
      std::vector<Expr> kids;
      for (std::size_t i = 0; i < n.num_kids(); ++i) kids.push_back(best(n.kids[i]));
      e = Expr::make(n.op, std::move(kids));
    }
  }
  memo_[c] = e;
  return e;
}

std::pair<Expr, Cost> extract_best(const EGraph& g, EClassId root, CostModel cm) {
  Extractor ex(g, cm);
  Expr e = ex.best(root);
  return {std::move(e), ex.cost(root)};
}

namespace {

using TermMemo = std::map<std::pair<EClassId, std::size_t>, std::set<Expr>>;

const std::set<Expr>& enumerate_rec(const EGraph& g, EClassId c, std::size_t depth,
                                    std::size_t max_terms, TermMemo& memo) {
  c = g.find(c);
  auto key = std::make_pair(c, depth);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  std::set<Expr> out;
  if (depth > 0) {
    for (const ENode& n : g.eclass(c).nodes) {
      if (out.size() >= max_terms) break;
      switch (n.op) {
        case Op::Var: out.insert(Expr::var(g.symbol(n.payload))); continue;
        case Op::Int: out.insert(Expr::integer(g.integer(n.payload))); continue;
        case Op::Bool: out.insert(Expr::boolean(n.payload != 0)); continue;
        default: break;
      }
      if (depth == 1) continue;
      if (n.num_kids() == 1) {
        for (const Expr& a : enumerate_rec(g, n.kids[0], depth - 1, max_terms, memo)) {
          if (out.size() >= max_terms) break;
          out.insert(Expr::unary(n.op, a));
        }
      } else {
        const std::set<Expr>& lhs = enumerate_rec(g, n.kids[0], depth - 1, max_terms, memo);
        const std::set<Expr>& rhs = enumerate_rec(g, n.kids[1], depth - 1, max_terms, memo);
        for (const Expr& a : lhs) {
          for (const Expr& b : rhs) {
            if (out.size() >= max_terms) break;
            out.insert(Expr::binary(n.op, a, b));
          }
        }
      }
    }
  }
  return memo[key] = std::move(out);
}

}  // namespace

std::set<Expr> enumerate_terms(const EGraph& g, EClassId c, std::size_t depth, std::size_t max_terms) {
  TermMemo memo;
  return enumerate_rec(g, c, depth, max_terms, memo);
}

}  // namespace eqprove
