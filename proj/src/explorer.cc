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

#include "cxlcache/explorer.hh"

#include <algorithm>
#include <thread>
#include <unordered_map>

namespace cxlcache {

bool ExploreReport::all_hold() const {
  return std::all_of(verdicts.begin(), verdicts.end(),
                     [](const Verdict& v) { return v.holds(); });
}

const Verdict* ExploreReport::verdict(std::string_view property) const {
  for (const auto& v : verdicts)
    if (v.property == property) return &v;
  return nullptr;
}

Trace ReachableGraph::path_to(const RuleCatalog& c, std::size_t index) const {
  std::vector<std::size_t> chain;
  for (std::size_t i = index; i != 0; i = nodes[i].parent) chain.push_back(i);
  Trace t{states.front(), {}};
  for (auto it = chain.rbegin(); it != chain.rend(); ++it)
    t.steps.push_back({c.at(nodes[*it].rule).name, states[*it]});
  return t;
}

namespace {

struct Successor {
  std::size_t rule;
  SystemState state;
  SystemState key;
};

struct Expansion {
  bool expandable = true;  // false for states with an oversized channel
  std::vector<Successor> succ;
};

Expansion expand(const RuleCatalog& c, const SystemState& s, bool canonical) {
  Expansion e;
  if (!singleton_channels(s)) {
    e.expandable = false;
    return e;
  }
  for (const auto& r : c.rules()) {
    if (!guard_holds(r, s)) continue;
    SystemState next = apply_rule(r, s);
    SystemState key = canonical ? canonical_form(next) : next;
    e.succ.push_back({r.id, std::move(next), std::move(key)});
  }
  return e;
}

std::vector<Expansion> expand_layer(const RuleCatalog& c,
                                    const ReachableGraph& g,
                                    const std::vector<std::size_t>& frontier,
                                    bool canonical, unsigned threads) {
  std::vector<Expansion> out(frontier.size());
  const std::size_t n = frontier.size();
  const std::size_t workers =
      std::min<std::size_t>(threads == 0 ? 1 : threads, n == 0 ? 1 : n);
  if (workers <= 1 || n < 64) {
    for (std::size_t i = 0; i < n; ++i)
      out[i] = expand(c, g.states[frontier[i]], canonical);
    return out;
  }
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers)
        out[i] = expand(c, g.states[frontier[i]], canonical);
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace

ReachableGraph explore_graph(const RuleCatalog& c, const SystemState& initial,
                             const Limits& lim,
                             const std::vector<PropertyDef>& props,
                             ExploreReport* report) {
  ReachableGraph g;
  ExploreReport rep;
  std::unordered_map<SystemState, std::size_t, StateHash> seen;
  std::vector<std::optional<std::size_t>> first_bad(props.size());
  bool violated = false;

  auto add = [&](SystemState s, SystemState key, std::size_t parent,
                 std::size_t rule, std::size_t depth) {
    const std::size_t idx = g.states.size();
    seen.emplace(std::move(key), idx);
    for (std::size_t p = 0; p < props.size(); ++p) {
      if (!first_bad[p] && !props[p].holds(s)) {
        first_bad[p] = idx;
        violated = true;
      }
    }
    g.states.push_back(std::move(s));
    g.nodes.push_back({parent, rule, depth, false, false});
    rep.depth_reached = std::max(rep.depth_reached, depth);
    return idx;
  };

  add(initial, lim.canonical_utids ? canonical_form(initial) : initial, 0, 0, 0);
  std::vector<std::size_t> frontier = {0};
  std::size_t depth = 0;
  bool full = g.states.size() >= std::max<std::size_t>(1, lim.max_states);

  while (!frontier.empty()) {
    if (lim.stop_on_violation && violated) {
      rep.truncated = true;
      break;
    }
    auto layer = expand_layer(c, g, frontier, lim.canonical_utids, lim.threads);
    if (depth >= lim.max_depth || full) {
      // Classify the boundary layer without adding anything.
      for (std::size_t i = 0; i < frontier.size(); ++i) {
        auto& node = g.nodes[frontier[i]];
        if (!layer[i].expandable) ++rep.unexpanded_count;
        else if (layer[i].succ.empty()) node.terminal = true;
        else rep.truncated = true;
      }
      break;
    }
    std::vector<std::size_t> next;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      const std::size_t parent = frontier[i];
      auto& exp = layer[i];
      if (!exp.expandable) {
        ++rep.unexpanded_count;
        continue;
      }
      g.nodes[parent].expanded = true;
      if (exp.succ.empty()) g.nodes[parent].terminal = true;
      for (auto& s : exp.succ) {
        if (seen.count(s.key)) continue;
        if (g.states.size() >= lim.max_states) {
          rep.truncated = true;
          full = true;
          break;
        }
        next.push_back(add(std::move(s.state), std::move(s.key), parent, s.rule,
                           depth + 1));
      }
      if (full) {
        // Parents after this one in the layer were never expanded.
        for (std::size_t k = i + 1; k < frontier.size(); ++k) {
          if (!layer[k].expandable) ++rep.unexpanded_count;
          else if (layer[k].succ.empty()) g.nodes[frontier[k]].terminal = true;
        }
        break;
      }
    }
    if (full) break;
    frontier = std::move(next);
    ++depth;
  }

  rep.reachable_count = g.states.size();
  for (const auto& n : g.nodes) rep.terminal_count += n.terminal ? 1 : 0;
  for (std::size_t p = 0; p < props.size(); ++p) {
    Verdict v{props[p].name, std::nullopt};
    if (first_bad[p]) v.witness = g.path_to(c, *first_bad[p]);
    rep.verdicts.push_back(std::move(v));
  }
  if (report) *report = std::move(rep);
  return g;
}

ExploreReport explore(const RuleCatalog& c, const SystemState& initial,
                      const Limits& lim) {
  const auto props = select_properties(lim.properties);
  ExploreReport rep;
  explore_graph(c, initial, lim, props, &rep);
  return rep;
}

std::optional<Trace> find_violation(const RuleCatalog& c,
                                    const SystemState& initial,
                                    std::string_view property, Limits lim) {
  const std::vector<PropertyDef> props = {find_property(property)};
  lim.stop_on_violation = true;
  ExploreReport rep;
  explore_graph(c, initial, lim, props, &rep);
  return rep.verdicts.front().witness;
}

namespace {

void enumerate(const RuleCatalog& c, const SystemState& s, std::size_t depth,
               StateSet& out) {
  out.insert(s);
  if (depth == 0 || !singleton_channels(s)) return;
  for (const auto& r : c.rules()) {
    if (guard_holds(r, s)) enumerate(c, apply_rule(r, s), depth - 1, out);
  }
}

}  // namespace

StateSet enumerate_oracle(const RuleCatalog& c, const SystemState& initial,
                          std::size_t depth) {
  StateSet out;
  enumerate(c, initial, depth, out);
  return out;
}

StateSet bfs_slice(const RuleCatalog& c, const SystemState& initial,
                   std::size_t depth) {
  Limits lim;
  lim.max_depth = depth;
  lim.canonical_utids = false;
  auto g = explore_graph(c, initial, lim, {});
  return StateSet(g.states.begin(), g.states.end());
}

MatrixReport matrix_check_reachable(const RuleCatalog& c,
                                    const std::vector<PropertyDef>& props,
                                    const std::vector<ReachableGraph>& graphs,
                                    std::vector<MatrixWitness>* witnesses,
                                    unsigned threads) {
  std::vector<SystemState> states;
  std::vector<std::pair<std::size_t, std::size_t>> origin;
  StateSet seen;
  for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
    const auto& g = graphs[gi];
    for (std::size_t i = 0; i < g.states.size(); ++i) {
      if (seen.insert(g.states[i]).second) {
        states.push_back(g.states[i]);
        origin.emplace_back(gi, i);
      }
    }
  }
  MatrixReport m = matrix_check(c, props, states, threads);
  if (witnesses) {
    witnesses->clear();
    for (auto [r, p] : m.failures()) {
      const auto& f = *m.cell(r, p).failure;
      auto [gi, ni] = origin[f.source_index];
      Trace t = graphs[gi].path_to(c, ni);
      t.steps.push_back({c.at(r).name, f.post});
      witnesses->push_back({r, p, std::move(t)});
    }
  }
  return m;
}

}  // namespace cxlcache
