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

#include "eqprove/ruleset.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace eqprove {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<sexpr::Node> read_forms(std::string_view text, const std::string& source) {
  try {
    return sexpr::read_all(text);
  } catch (const SyntaxError& e) {
    throw RuleFileError(source, sexpr::line_of(text, e.offset()), e.what());
  }
}

// Runs `fn` and rethrows library errors tagged with the line of `offset`.
template <class Fn>
auto at_line(std::string_view text, const std::string& source, std::size_t offset, Fn&& fn) {
  try {
    return fn();
  } catch (const SyntaxError& e) {
    throw RuleFileError(source, sexpr::line_of(text, e.offset()), e.what());
  } catch (const RuleFileError&) {
    throw;
  } catch (const Error& e) {
    throw RuleFileError(source, sexpr::line_of(text, offset), e.what());
  }
}

}  // namespace

RuleFileError::RuleFileError(const std::string& source, std::size_t line, const std::string& msg)
    : Error(source + ":" + std::to_string(line) + ": " + msg), line_(line) {}

const Rule* Ruleset::find(std::string_view rule_name) const {
  for (const Rule& r : rules) {
    if (r.name == rule_name) return &r;
  }
  return nullptr;
}

Ruleset parse_rules(std::string_view text, const std::string& source) {
  Ruleset rs;
  std::set<std::string, std::less<>> names;
  bool first = true;
  for (const sexpr::Node& form : read_forms(text, source)) {
    at_line(text, source, form.offset, [&] {
      if (first && form.is_list && !form.items.empty() && form.items[0].is_atom("ruleset")) {
        if (form.items.size() != 3 || form.items[1].is_list || form.items[2].is_list) {
          throw SyntaxError("expected (ruleset <name> <version>)", form.offset);
        }
        rs.name = form.items[1].atom;
        rs.version = form.items[2].atom;
        return;
      }
      Rule r = parse_rule(form);
      if (!names.insert(r.name).second) {
        throw SyntaxError("duplicate rule name '" + r.name + "'", form.offset);
      }
      rs.rules.push_back(std::move(r));
    });
    first = false;
  }
  return rs;
}

Ruleset load_rules(const std::string& path) { return parse_rules(read_file(path), path); }

std::string serialize_rules(const Ruleset& rs) {
  std::ostringstream os;
  if (!rs.name.empty()) os << "(ruleset " << rs.name << ' ' << rs.version << ")\n";
  for (const Rule& r : rs.rules) os << print_rule(r) << '\n';
  return os.str();
}

std::vector<NPPattern> parse_nppd(std::string_view text, const std::string& source) {
  std::vector<NPPattern> out;
  std::set<std::string, std::less<>> ids;
  for (const sexpr::Node& form : read_forms(text, source)) {
    at_line(text, source, form.offset, [&] {
      if (!form.is_list || form.items.size() < 3 || !form.items[0].is_atom("nppd") ||
          form.items[1].is_list) {
        throw SyntaxError("expected (nppd <id> <pattern> [:if <cond>])", form.offset);
      }
      NPPattern p;
      p.id = form.items[1].atom;
      p.pattern.root = parse_pattern_node(form.items[2], p.pattern.vars, true);
      std::vector<Sort> sorts = infer_var_sorts(p.pattern);
      if (p.pattern.root.is_var || pattern_sort(p.pattern, sorts) != Sort::Bool) {
        throw SortError("pattern " + p.id + " is not boolean-sorted");
      }
      if (form.items.size() > 3) {
        if (!form.items[3].is_atom(":if") || form.items.size() < 5) {
          throw SyntaxError("expected ':if <cond>' after the pattern", form.items[3].offset);
        }
        p.cond = parse_condition(std::span<const sexpr::Node>(form.items).subspan(4), p.pattern.vars);
      }
      if (!ids.insert(p.id).second) {
        throw SyntaxError("duplicate pattern id '" + p.id + "'", form.offset);
      }
      out.push_back(std::move(p));
    });
  }
  return out;
}

std::vector<NPPattern> load_nppd(const std::string& path) { return parse_nppd(read_file(path), path); }

std::string serialize_nppd(const std::vector<NPPattern>& patterns) {
  std::ostringstream os;
  for (const NPPattern& p : patterns) {
    os << "(nppd " << p.id << ' ' << print_pattern(p.pattern);
    if (!p.cond.empty()) os << " :if " << print_condition(p.cond, p.pattern.vars);
    os << ")\n";
  }
  return os.str();
}

const Ruleset& default_ruleset() {
  static const Ruleset rs = parse_rules(default_rules_text(), "default.rules");
  return rs;
}

const std::vector<NPPattern>& default_nppd_patterns() {
  static const std::vector<NPPattern> ps = parse_nppd(default_nppd_text(), "nppd.rules");
  return ps;
}

}  // namespace eqprove
