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

#ifndef CXLCACHE_LITMUS_HH_
#define CXLCACHE_LITMUS_HH_

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cxlcache/engine.hh"
#include "cxlcache/explorer.hh"
#include "cxlcache/rules.hh"
#include "cxlcache/types.hh"

namespace cxlcache {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& msg);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class UnknownRuleName : public ParseError {
 public:
  UnknownRuleName(std::size_t line, std::size_t column, const std::string& name)
      : ParseError(line, column, "unknown rule '" + name + "'"), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class UnknownField : public ParseError {
 public:
  UnknownField(std::size_t line, std::size_t column, const std::string& name)
      : ParseError(line, column, "unknown field '" + name + "'"), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

/// `<field> = <value>` on a final state. `field` is a state field name or
/// one of devcache1.state, devcache1.val, devcache2.*, hcache.*.
struct FieldAssertion {
  std::string field;
  std::string expected;  // whitespace removed
};

struct LitmusTest {
  std::string name;
  RelaxConfig relax;
  DeviceLine dev1;
  DeviceLine dev2;
  HostLine host;
  Program prog1;
  Program prog2;
  std::optional<std::vector<std::string>> schedule;
  bool expect_coherent = false;
  std::vector<std::string> expect_violation;  // property names
  std::vector<FieldAssertion> expect_terminal;

  SystemState initial() const;
};

struct LitmusResult {
  std::string name;
  bool pass = false;
  std::vector<std::string> details;  // failed checks; empty on pass
  std::optional<Trace> guided;
  std::optional<Trace> witness;  // first violation trace, if any
  std::optional<ExploreReport> report;
};

/// Throws ParseError, UnknownRuleName, UnknownField.
LitmusTest parse_litmus(const std::string& text);

/// Reads the current value of an assertion field.
/// Returns nullopt for an unknown field name.
std::optional<std::string> read_field(const SystemState& s,
                                      const std::string& field);

/**
 * With a schedule, terminal assertions are checked on the final state of
 * the guided run. Without one they are checked on every terminal state of
 * the exhaustive exploration. Coherent and violation expectations always
 * explore exhaustively. Throws ScheduleStuck.
 */
LitmusResult run_litmus(const LitmusTest& t, const Limits& lim = {});

/// Source text of each built-in test, in suite order.
const std::vector<std::pair<std::string, std::string>>& builtin_sources();

std::vector<LitmusTest> builtin_suite();

/// Reachable graph of every built-in test's initial state under the catalog
/// (the tests' own relax flags are ignored).
std::vector<ReachableGraph> builtin_reachable(const RuleCatalog& c,
                                              unsigned threads = 1);

}  // namespace cxlcache

#endif  // CXLCACHE_LITMUS_HH_
