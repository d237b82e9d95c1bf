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

#ifndef CXLCACHE_ENGINE_HH_
#define CXLCACHE_ENGINE_HH_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cxlcache/rules.hh"
#include "cxlcache/types.hh"

namespace cxlcache {

struct TraceStep {
  std::string rule;
  SystemState state;
  bool operator==(const TraceStep&) const = default;
};

/// An initial state followed by one (rule, resulting state) pair per firing.
struct Trace {
  SystemState initial;
  std::vector<TraceStep> steps;

  const SystemState& final_state() const {
    return steps.empty() ? initial : steps.back().state;
  }
  std::vector<std::string> rule_names() const;
  bool operator==(const Trace&) const = default;
};

/// A schedule entry whose rule was not enabled. Carries the state it was
/// attempted on.
class ScheduleStuck : public std::runtime_error {
 public:
  ScheduleStuck(std::size_t index, std::string rule, SystemState state);
  std::size_t index() const { return index_; }
  const std::string& rule() const { return rule_; }
  const SystemState& state() const { return state_; }

 private:
  std::size_t index_;
  std::string rule_;
  SystemState state_;
};

/// Throws UnknownRule or RuleNotEnabled.
SystemState step(const RuleCatalog& c, const SystemState& s,
                 std::string_view rule);

/// Throws UnknownRule for a name not in the catalog, ScheduleStuck for a
/// rule that is not enabled when reached.
Trace run_schedule(const RuleCatalog& c, const SystemState& initial,
                   const std::vector<std::string>& schedule);

bool is_terminal(const RuleCatalog& c, const SystemState& s);

/// Replays every step. Returns a description of the first step that does
/// not reproduce its stored state, or nullopt if the trace is valid.
std::optional<std::string> validate_trace(const RuleCatalog& c,
                                          const Trace& t);

}  // namespace cxlcache

#endif  // CXLCACHE_ENGINE_HH_
