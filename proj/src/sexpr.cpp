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

#include "eqprove/sexpr.hpp"

#include <algorithm>
#include <cctype>

#include "eqprove/expr.hpp"

namespace eqprove::sexpr {

namespace {

class Reader {
public:
  explicit Reader(std::string_view text) : text_(text) {}

  bool at_end() {
    skip();
    return pos_ >= text_.size();
  }

  Node read() {
    skip();
    if (pos_ >= text_.size()) {
      throw SyntaxError("unexpected end of input", pos_);
    }
    Node node;
    node.offset = pos_;
    char c = text_[pos_];
    if (c == ')') {
      throw SyntaxError("unexpected ')'", pos_);
    }
    if (c == '(') {
      node.is_list = true;
      ++pos_;
      while (true) {
        skip();
        if (pos_ >= text_.size()) {
          throw SyntaxError("unterminated list", node.offset);
        }
        if (text_[pos_] == ')') {
          ++pos_;
          break;
        }
        node.items.push_back(read());
      }
      return node;
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && !is_delim(text_[pos_])) {
      ++pos_;
    }
    node.atom = std::string(text_.substr(start, pos_ - start));
    return node;
  }

  std::size_t pos() const { return pos_; }

private:
  static bool is_delim(char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ';';
  }

  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') {
          ++pos_;
        }
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<Node> read_all(std::string_view text) {
  Reader reader(text);
  std::vector<Node> out;
  while (!reader.at_end()) {
    out.push_back(reader.read());
  }
  return out;
}

Node read_one(std::string_view text) {
  Reader reader(text);
  Node node = reader.read();
  if (!reader.at_end()) {
    throw SyntaxError("trailing input after expression", reader.pos());
  }
  return node;
}

std::size_t line_of(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
}

}  // namespace eqprove::sexpr
