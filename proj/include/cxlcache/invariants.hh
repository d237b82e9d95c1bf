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

#ifndef CXLCACHE_INVARIANTS_HH_
#define CXLCACHE_INVARIANTS_HH_

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cxlcache/rules.hh"
#include "cxlcache/types.hh"

namespace cxlcache {

/// No device holds EM while the other holds SH or EM.
bool swmr(const SystemState& s);

/// A device that has been granted write access (or is about to be) sees no
/// reader on the other side unless a SnpInv is on its way there.
bool transient_swmr(const SystemState& s);

/// RspIFwdM / RspIHitSE at the head of dthrsp only from a line that is gone.
bool honest_snoop(const SystemState& s);

bool singleton_channels(const SystemState& s);

/// Data never flows towards one device while the other is sending data.
bool data_no_conflict(const SystemState& s);

struct PropertyDef {
  std::string name;
  std::function<bool(const SystemState&)> holds;
  std::string description;
};

class UnknownProperty : public std::runtime_error {
 public:
  explicit UnknownProperty(const std::string& name)
      : std::runtime_error("unknown property '" + name + "'"), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

/// swmr followed by the four conjuncts.
const std::vector<PropertyDef>& builtin_properties();

/// Looks up a built-in property. Throws UnknownProperty.
const PropertyDef& find_property(std::string_view name);

/// Throws UnknownProperty. An empty list selects every built-in.
std::vector<PropertyDef> select_properties(const std::vector<std::string>& names);

struct MatrixFailure {
  std::size_t source_index = 0;  // position of the pre-state in the source
  SystemState pre;
  SystemState post;
};

struct MatrixCell {
  std::size_t checked = 0;  // successor evaluations in this cell
  std::optional<MatrixFailure> failure;
  bool pass() const { return !failure; }
};

struct MatrixReport {
  std::vector<std::string> rules;
  std::vector<std::string> properties;
  std::vector<MatrixCell> cells;  // row-major: rules x properties
  std::size_t states_checked = 0;  // source states satisfying every property
  std::size_t states_skipped = 0;

  const MatrixCell& cell(std::size_t rule, std::size_t prop) const {
    return cells[rule * properties.size() + prop];
  }
  MatrixCell& cell(std::size_t rule, std::size_t prop) {
    return cells[rule * properties.size() + prop];
  }
  bool all_pass() const;
  /// (rule, property) index pairs of failing cells, row-major.
  std::vector<std::pair<std::size_t, std::size_t>> failures() const;
};

/**
 * Consecution check over supplied states: each state satisfying every
 * property is stepped by each enabled rule and every property is evaluated
 * on the successor. The first failing state in source order is kept per
 * cell, so the result does not depend on `threads`.
 */
MatrixReport matrix_check(const RuleCatalog& c,
                          const std::vector<PropertyDef>& props,
                          const std::vector<SystemState>& states,
                          unsigned threads = 1);

std::string matrix_markdown(const MatrixReport& m);

}  // namespace cxlcache

#endif  // CXLCACHE_INVARIANTS_HH_
