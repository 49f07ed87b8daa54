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

#ifndef EQPROVE_RULESET_HPP
#define EQPROVE_RULESET_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "eqprove/rewrite.hpp"

namespace eqprove {

struct Ruleset {
  std::string name;
  std::string version;
  std::vector<Rule> rules;

  std::size_t size() const { return rules.size(); }
  const Rule* find(std::string_view rule_name) const;
};

/// Non-provable pattern: when it matches the root class with its condition
/// satisfied, the expression is reported as non-provable.
struct NPPattern {
  std::string id;
  Pattern pattern;
  Condition cond;
};

/// Rule or pattern file problem; the message is prefixed with `source:line:`.
class RuleFileError : public Error {
public:
  RuleFileError(const std::string& source, std::size_t line, const std::string& msg);
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

const Ruleset& default_ruleset();
const std::vector<NPPattern>& default_nppd_patterns();

/// Text of the built-in files, as embedded at build time.
std::string_view default_rules_text();
std::string_view default_nppd_text();

/// Rule file: an optional `(ruleset <name> <version>)` header followed by
/// `(rule ...)` forms; `;` starts a comment.
Ruleset parse_rules(std::string_view text, const std::string& source = "<string>");
Ruleset load_rules(const std::string& path);
std::string serialize_rules(const Ruleset& rs);

/// Pattern file: `(nppd <id> <pattern> [:if <cond>...])` forms.
std::vector<NPPattern> parse_nppd(std::string_view text, const std::string& source = "<string>");
std::vector<NPPattern> load_nppd(const std::string& path);
std::string serialize_nppd(const std::vector<NPPattern>& patterns);

}  // namespace eqprove

#endif  // EQPROVE_RULESET_HPP
