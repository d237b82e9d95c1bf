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

#ifndef CXLCACHE_RULES_HH_
#define CXLCACHE_RULES_HH_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cxlcache/types.hh"

namespace cxlcache {

/// Ordering restrictions that tag relaxable guard conjuncts.
enum class Restriction : std::uint8_t {
  SnoopPushesGo,     // a snoop may not overtake a GO to the same device
  GoCannotTailgate,  // no GO while a snoop to that device is unanswered
  OneSnoopPerAddr,   // at most one snoop pending per line
};

std::string_view to_string(Restriction r);
Restriction parse_restriction(std::string_view s);

/// true = restriction enforced. All true is the faithful model.
struct RelaxConfig {
  bool snoop_pushes_go = true;
  bool go_cannot_tailgate = true;
  bool one_snoop_per_addr = true;

  static RelaxConfig faithful() { return {}; }
  bool enforces(Restriction r) const;
  void relax(Restriction r);
  bool is_faithful() const {
    return snoop_pushes_go && go_cannot_tailgate && one_snoop_per_addr;
  }
  bool operator==(const RelaxConfig&) const = default;
};

enum class RuleFamily : std::uint8_t {
  InstrIssue, LocalHit, HostD2HReq, DeviceSnoop, DeviceH2DResp, HostD2HResp,
  HostData, DeviceData
};

std::string_view to_string(RuleFamily f);

using StatePredicate = std::function<bool(const SystemState&)>;

struct GuardConjunct {
  std::string text;
  StatePredicate holds;
  std::optional<Restriction> restriction;
};

/// One assignment of an action block. It reads only the pre-state and
/// writes only `target` in the post-state, which makes the block atomic.
struct Effect {
  Field target;
  std::string text;
  std::function<void(const SystemState& pre, SystemState& post)> apply;
};

struct Rule {
  std::size_t id = 0;
  std::string name;
  DeviceId device = DeviceId::One();
  RuleFamily family = RuleFamily::InstrIssue;
  std::vector<GuardConjunct> guards;          // active conjuncts
  std::vector<GuardConjunct> relaxed_guards;  // dropped by the config
  std::vector<Effect> effects;
  bool tracking = false;  // host guard reads device cache states directly
  std::string origin;     // "published" for rules named in the literature

  std::vector<Restriction> relaxable() const;
  std::vector<Field> writes() const;
};

class UnknownRule : public std::runtime_error {
 public:
  explicit UnknownRule(const std::string& name)
      : std::runtime_error("unknown rule '" + name + "'"), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class RuleNotEnabled : public std::runtime_error {
 public:
  explicit RuleNotEnabled(const std::string& name)
      : std::runtime_error("rule '" + name + "' is not enabled"), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class RuleCatalog {
 public:
  RuleCatalog(std::vector<Rule> rules, RelaxConfig config);

  const std::vector<Rule>& rules() const { return rules_; }
  const RelaxConfig& config() const { return config_; }
  const Rule& at(std::size_t id) const { return rules_.at(id); }
  const Rule* find(std::string_view name) const;
  /// Throws UnknownRule.
  const Rule& get(std::string_view name) const;
  std::size_t size() const { return rules_.size(); }

 private:
  std::vector<Rule> rules_;
  std::map<std::string, std::size_t, std::less<>> by_name_;
  RelaxConfig config_;
};

RuleCatalog build_catalog(const RelaxConfig& config = RelaxConfig::faithful());

/// The shared faithful catalog.
const RuleCatalog& faithful_catalog();

bool guard_holds(const Rule& r, const SystemState& s);

/// Throws RuleNotEnabled if the guard does not hold.
SystemState apply_rule(const Rule& r, const SystemState& s);

/// Ids of enabled rules, ascending.
std::vector<std::size_t> enabled_rules(const RuleCatalog& c,
                                       const SystemState& s);

/// Name with the device suffix removed ("SharedSnpInv1" -> "SharedSnpInv").
std::string base_name(const Rule& r);

/// Rule names that appear in the published rule selection and scenario
/// tables; each must exist in the faithful catalog.
const std::vector<std::string>& published_rule_names();

/// Markdown reference, one section per rule.
std::string catalog_markdown(const RuleCatalog& c);

}  // namespace cxlcache

#endif  // CXLCACHE_RULES_HH_
