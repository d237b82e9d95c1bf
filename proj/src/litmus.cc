/*
 * Copyright (c) 2026, The cxlcache Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
*/

#include "cxlcache/litmus.hh"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "cxlcache/invariants.hh"

namespace cxlcache {

ParseError::ParseError(std::size_t line, std::size_t column,
                       const std::string& msg)
    : std::runtime_error("line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ": " + msg),
      line_(line),
      column_(column) {}

SystemState LitmusTest::initial() const {
  return mk_initial_state(dev1, dev2, host, prog1, prog2);
}

namespace {

std::string strip_ws(std::string_view s) {
  std::string out;
  for (char ch : s)
    if (!std::isspace(static_cast<unsigned char>(ch))) out += ch;
  return out;
}

class Cursor {
 public:
  Cursor(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }
  std::size_t column() const { return pos_ + 1; }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  std::string word() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size()) {
      const char ch = text_[pos_];
      if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' ||
          ch == '+' || ch == '.')
        ++pos_;
      else
        break;
    }
    if (pos_ == start) fail("expected a name");
    return std::string(text_.substr(start, pos_ - start));
  }

  Val integer() {
    skip_ws();
    const std::size_t start = pos_;
    if (pos_ < text_.size() && text_[pos_] == '-') ++pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    const auto s = text_.substr(start, pos_ - start);
    if (s.empty() || s == "-") fail("expected an integer");
    try {
      return std::stoi(std::string(s));
    } catch (const std::exception&) {
      fail("integer out of range", start + 1);
    }
  }

  std::string rest() {
    std::string out(text_.substr(pos_));
    pos_ = text_.size();
    return out;
  }

  void end() {
    if (!at_end()) fail("unexpected trailing text");
  }

  [[noreturn]] void fail(const std::string& msg) const { fail(msg, column()); }
  [[noreturn]] void fail(const std::string& msg, std::size_t col) const {
    throw ParseError(line_, col, msg);
  }
  std::size_t line() const { return line_; }

 private:
  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

// "[a, b, c]" with each element read by `item`.
template <class F>
void list(Cursor& c, F item) {
  c.expect('[');
  if (c.accept(']')) return;
  do {
    item();
  } while (c.accept(','));
  c.expect(']');
}

template <class State, class Parse>
std::pair<Val, State> cache_line(Cursor& c, Parse parse) {
  c.expect('(');
  const Val v = c.integer();
  c.expect(',');
  c.skip_ws();
  const std::size_t col = c.column();
  const std::string name = c.word();
  State s;
  try {
    s = parse(name);
  } catch (const std::invalid_argument&) {
    c.fail("unknown state '" + name + "'", col);
  }
  if (!is_stable(s)) c.fail("initial state '" + name + "' is transient", col);
  c.expect(')');
  return {v, s};
}

Program program(Cursor& c) {
  Program p;
  list(c, [&] {
    c.skip_ws();
    const std::size_t col = c.column();
    const std::string w = c.word();
    try {
      p.push_back(parse_instruction(w));
    } catch (const std::invalid_argument&) {
      c.fail("unknown instruction '" + w + "'", col);
    }
  });
  return p;
}

std::string value_of(const SystemState& s, const std::string& base,
                     const std::string& sub) {
  if (base == "devcache1" || base == "devcache2") {
    const auto& line = s.dev[base == "devcache1" ? 0 : 1].cache;
    return sub == "state" ? std::string(to_string(line.state))
                          : std::to_string(line.val);
  }
  return sub == "state" ? std::string(to_string(s.host.state))
                        : std::to_string(s.host.val);
}

}  // namespace

std::optional<std::string> read_field(const SystemState& s,
                                      const std::string& field) {
  if (auto f = parse_field(field)) return strip_ws(render_field(s, *f));
  const auto dot = field.find('.');
  if (dot == std::string::npos) return std::nullopt;
  const std::string base = field.substr(0, dot);
  const std::string sub = field.substr(dot + 1);
  if ((base == "devcache1" || base == "devcache2" || base == "hcache") &&
      (sub == "state" || sub == "val"))
    return value_of(s, base, sub);
  return std::nullopt;
}

LitmusTest parse_litmus(const std::string& text) {
  LitmusTest t;
  bool have_name = false;
  bool have_expect = false;
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    Cursor c(raw, lineno);
    if (c.at_end()) continue;
    const std::size_t key_col = c.column();
    const std::string key = c.word();
    c.accept(':');

    if (key == "test") {
      if (have_name) c.fail("duplicate test directive", key_col);
      t.name = c.word();
      have_name = true;
    } else if (key == "relax") {
      c.skip_ws();
      const std::size_t col = c.column();
      const std::string flag = c.word();
      try {
        t.relax.relax(parse_restriction(flag));
      } catch (const std::invalid_argument&) {
        c.fail("unknown restriction '" + flag + "'", col);
      }
    } else if (key == "devcache1" || key == "devcache2") {
      c.expect('=');
      auto [v, s] = cache_line<DeviceState>(c, parse_device_state);
      (key == "devcache1" ? t.dev1 : t.dev2) = DeviceLine{v, s};
    } else if (key == "hcache") {
      c.expect('=');
      auto [v, s] = cache_line<HostState>(c, parse_host_state);
      t.host = HostLine{v, s};
    } else if (key == "prog1" || key == "prog2") {
      c.expect('=');
      (key == "prog1" ? t.prog1 : t.prog2) = program(c);
    } else if (key == "schedule") {
      c.expect('=');
      std::vector<std::string> names;
      const auto& cat = faithful_catalog();
      list(c, [&] {
        c.skip_ws();
        const std::size_t col = c.column();
        std::string n = c.word();
        if (!cat.find(n)) throw UnknownRuleName(lineno, col, n);
        names.push_back(std::move(n));
      });
      t.schedule = std::move(names);
    } else if (key == "expect") {
      c.skip_ws();
      const std::size_t col = c.column();
      const std::string kind = c.word();
      if (kind == "coherent") {
        t.expect_coherent = true;
      } else if (kind == "violation") {
        c.skip_ws();
        const std::size_t pcol = c.column();
        const std::string prop = c.word();
        try {
          find_property(prop);
        } catch (const UnknownProperty&) {
          c.fail("unknown property '" + prop + "'", pcol);
        }
        t.expect_violation.push_back(prop);
      } else if (kind == "terminal") {
        c.skip_ws();
        const std::size_t fcol = c.column();
        const std::string field = c.word();
        if (!read_field(SystemState{}, field))
          throw UnknownField(lineno, fcol, field);
        c.expect('=');
        const std::string value = strip_ws(c.rest());
        if (value.empty()) c.fail("expected a value");
        t.expect_terminal.push_back({field, value});
      } else {
        c.fail("unknown expectation '" + kind + "'", col);
      }
      have_expect = true;
    } else {
      c.fail("unknown directive '" + key + "'", key_col);
    }
    c.end();
  }
  if (!have_name) throw ParseError(std::max<std::size_t>(lineno, 1), 1, "missing test directive");
  if (!have_expect) throw ParseError(std::max<std::size_t>(lineno, 1), 1, "no expectation given");
  return t;
}

namespace {

void check_terminal(const LitmusTest& t, const SystemState& s,
                    const std::string& where, std::vector<std::string>& out) {
  for (const auto& a : t.expect_terminal) {
    const std::string got = *read_field(s, a.field);
    if (got != a.expected)
      out.push_back(where + ": " + a.field + " = " + got + ", expected " + a.expected);
  }
}

}  // namespace

LitmusResult run_litmus(const LitmusTest& t, const Limits& lim) {
  LitmusResult res;
  res.name = t.name;
  const RuleCatalog cat = build_catalog(t.relax);
  const SystemState init = t.initial();

  if (t.schedule) {
    res.guided = run_schedule(cat, init, *t.schedule);
    check_terminal(t, res.guided->final_state(), "guided final state", res.details);
  }

  const bool exhaustive = t.expect_coherent || !t.expect_violation.empty() ||
                          (!t.schedule && !t.expect_terminal.empty());
  if (exhaustive) {
    Limits l = lim;
    l.properties.clear();
    ExploreReport rep;
    const auto g = explore_graph(cat, init, l, builtin_properties(), &rep);
    if (rep.truncated) res.details.push_back("exploration truncated");
    for (const auto& v : rep.verdicts) {
      if (v.witness && !res.witness) res.witness = v.witness;
    }
    if (t.expect_coherent) {
      for (const auto& v : rep.verdicts)
        if (!v.holds())
          res.details.push_back("property " + v.property + " violated after " +
                                std::to_string(v.witness->steps.size()) + " steps");
    }
    for (const auto& p : t.expect_violation) {
      const Verdict* v = rep.verdict(p);
      if (v->holds()) {
        res.details.push_back("expected a violation of " + p + ", none found");
      } else {
        res.witness = v->witness;
      }
    }
    if (!t.schedule) {
      for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        if (g.nodes[i].terminal)
          check_terminal(t, g.states[i], "terminal state #" + std::to_string(i),
                         res.details);
      }
    }
    res.report = std::move(rep);
  }
  res.pass = res.details.empty();
  return res;
}

std::vector<LitmusTest> builtin_suite() {
  std::vector<LitmusTest> out;
  for (const auto& [name, text] : builtin_sources()) out.push_back(parse_litmus(text));
  return out;
}

std::vector<ReachableGraph> builtin_reachable(const RuleCatalog& c,
                                              unsigned threads) {
  Limits lim;
  lim.threads = threads;
  std::vector<ReachableGraph> out;
  for (const auto& t : builtin_suite())
    out.push_back(explore_graph(c, t.initial(), lim, {}));
  return out;
}

}  // namespace cxlcache
