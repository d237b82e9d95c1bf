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

#include "cxlcache/engine.hh"

namespace cxlcache {

std::vector<std::string> Trace::rule_names() const {
  std::vector<std::string> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(s.rule);
  return out;
}

ScheduleStuck::ScheduleStuck(std::size_t index, std::string rule,
                             SystemState state)
    : std::runtime_error("schedule stuck at step " + std::to_string(index + 1) +
                         ": rule '" + rule + "' is not enabled"),
      index_(index),
      rule_(std::move(rule)),
      state_(std::move(state)) {}

SystemState step(const RuleCatalog& c, const SystemState& s,
                 std::string_view rule) {
  return apply_rule(c.get(rule), s);
}

Trace run_schedule(const RuleCatalog& c, const SystemState& initial,
                   const std::vector<std::string>& schedule) {
  Trace t{initial, {}};
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const Rule& r = c.get(schedule[i]);
    const SystemState& cur = t.final_state();
    if (!guard_holds(r, cur)) throw ScheduleStuck(i, r.name, cur);
    SystemState next = apply_rule(r, cur);
    t.steps.push_back({r.name, std::move(next)});
  }
  return t;
}

bool is_terminal(const RuleCatalog& c, const SystemState& s) {
  for (const auto& r : c.rules())
    if (guard_holds(r, s)) return false;
  return true;
}

std::optional<std::string> validate_trace(const RuleCatalog& c,
                                          const Trace& t) {
  const SystemState* cur = &t.initial;
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const auto& st = t.steps[i];
    const Rule* r = c.find(st.rule);
    const std::string where = "step " + std::to_string(i + 1) + " (" + st.rule + ")";
    if (!r) return where + ": unknown rule";
    if (!guard_holds(*r, *cur)) return where + ": guard does not hold";
    if (apply_rule(*r, *cur) != st.state) return where + ": state mismatch";
    cur = &st.state;
  }
  return std::nullopt;
}

}  // namespace cxlcache
