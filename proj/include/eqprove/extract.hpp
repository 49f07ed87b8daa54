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

#ifndef EQPROVE_EXTRACT_HPP
#define EQPROVE_EXTRACT_HPP

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "eqprove/egraph.hpp"
#include "eqprove/expr.hpp"

namespace eqprove {

enum class CostModel : std::uint8_t { AstSize, AstDepth };

using Cost = std::uint64_t;
inline constexpr Cost kInfiniteCost = std::numeric_limits<Cost>::max();

/// Minimum-cost representatives for every class of a rebuilt graph.
///
/// Costs come from a fixed-point relaxation over all e-nodes. Among equal-cost
/// e-nodes the choice is structural: operator ordinal, then leaf value, then
/// the rank of each child's chosen term. The result depends only on the
/// represented terms, never on class ids.
class Extractor {
public:
  Extractor(const EGraph& g, CostModel cm);

  Cost cost(EClassId c) const { return cost_[g_.find(c)]; }
  /// Throws Error if the class has no finite term.
  Expr best(EClassId c);

private:
  const ENode& chosen(EClassId c) const;

  const EGraph& g_;
  CostModel cm_;
  std::vector<Cost> cost_;
  std::vector<std::uint32_t> choice_;
  std::vector<std::optional<Expr>> memo_;
};

std::pair<Expr, Cost> extract_best(const EGraph& g, EClassId root,
                                   CostModel cm = CostModel::AstSize);

/// Every term representable from `c` with AST depth at most `depth`. Stops
/// adding terms once `max_terms` is reached for any single class.
std::set<Expr> enumerate_terms(const EGraph& g, EClassId c, std::size_t depth,
                               std::size_t max_terms = std::numeric_limits<std::size_t>::max());

}  // namespace eqprove

#endif  // EQPROVE_EXTRACT_HPP
