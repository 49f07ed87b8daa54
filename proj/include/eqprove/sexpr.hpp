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

#ifndef EQPROVE_SEXPR_HPP
#define EQPROVE_SEXPR_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace eqprove::sexpr {

/// Untyped s-expression: an atom or a parenthesized list.
struct Node {
  bool is_list = false;
  std::string atom;
  std::vector<Node> items;
  std::size_t offset = 0;

  bool is_atom(std::string_view s) const { return !is_list && atom == s; }
};

/// Reads every top-level datum in `text`. `;` starts a line comment.
/// Throws SyntaxError with the byte offset of the problem.
std::vector<Node> read_all(std::string_view text);

/// Reads exactly one datum.
Node read_one(std::string_view text);

/// 1-based line number of a byte offset.
std::size_t line_of(std::string_view text, std::size_t offset);

}  // namespace eqprove::sexpr

#endif  // EQPROVE_SEXPR_HPP
