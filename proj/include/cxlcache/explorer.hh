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

#ifndef CXLCACHE_EXPLORER_HH_
#define CXLCACHE_EXPLORER_HH_

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "cxlcache/engine.hh"
#include "cxlcache/invariants.hh"
#include "cxlcache/rules.hh"

namespace cxlcache {

struct Limits {
  std::size_t max_states = 10'000'000;
  std::size_t max_depth = std::numeric_limits<std::size_t>::max();
  std::vector<std::string> properties;  // empty: every built-in property
  /// Deduplicate states up to an order-preserving renaming of UTIDs and the
  /// counter. Off means exact structural equality.
  bool canonical_utids = true;
  unsigned threads = 1;
  /// Stop at the end of the first BFS layer that produced a violation.
  bool stop_on_violation = false;
};

struct Verdict {
  std::string property;
  std::optional<Trace> witness;  // shortest trace to a violating state
  bool holds() const { return !witness; }
};

struct ExploreReport {
  std::size_t reachable_count = 0;
  std::size_t terminal_count = 0;
  std::size_t depth_reached = 0;
  std::size_t unexpanded_count = 0;  // states with a non-singleton channel
  bool truncated = false;            // a limit (or early stop) cut the search
  std::vector<Verdict> verdicts;

  bool all_hold() const;
  /// nullptr if the property was not checked.
  const Verdict* verdict(std::string_view property) const;
};

/// BFS tree over the reachable states. states[0] is the initial state.
/// Each stored state is concrete: the exact result of replaying its path.
struct ReachableGraph {
  struct Node {
    std::size_t parent = 0;
    std::size_t rule = 0;  // rule id fired from the parent
    std::size_t depth = 0;
    bool terminal = false;
    bool expanded = false;
  };
  std::vector<SystemState> states;
  std::vector<Node> nodes;

  /// Trace from the initial state to states[index].
  Trace path_to(const RuleCatalog& c, std::size_t index) const;
};

/// Explores and keeps the BFS tree. Properties are taken from `props`;
/// `lim.properties` is ignored.
ReachableGraph explore_graph(const RuleCatalog& c, const SystemState& initial,
                             const Limits& lim,
                             const std::vector<PropertyDef>& props,
                             ExploreReport* report = nullptr);

/// Throws UnknownProperty.
ExploreReport explore(const RuleCatalog& c, const SystemState& initial,
                      const Limits& lim = {});

/// Shortest trace to a state violating `property`. Throws UnknownProperty.
std::optional<Trace> find_violation(const RuleCatalog& c,
                                    const SystemState& initial,
                                    std::string_view property,
                                    Limits lim = {});

using StateSet = std::unordered_set<SystemState, StateHash>;

/// States reachable in at most `depth` steps, by plain recursion without any
/// visited set. Exponential; meant as an independent check of the BFS.
StateSet enumerate_oracle(const RuleCatalog& c, const SystemState& initial,
                          std::size_t depth);

/// States of the exact-equality BFS with depth at most `depth`.
StateSet bfs_slice(const RuleCatalog& c, const SystemState& initial,
                   std::size_t depth);

struct MatrixWitness {
  std::size_t rule = 0;
  std::size_t property = 0;
  Trace path;  // initial state to the failing pre-state, then the rule
};

/// matrix_check over the union of several reachable graphs, with each
/// failing cell's witness extended to a full trace ending in the post-state.
MatrixReport matrix_check_reachable(const RuleCatalog& c,
                                    const std::vector<PropertyDef>& props,
                                    const std::vector<ReachableGraph>& graphs,
                                    std::vector<MatrixWitness>* witnesses,
                                    unsigned threads = 1);

}  // namespace cxlcache

#endif  // CXLCACHE_EXPLORER_HH_
