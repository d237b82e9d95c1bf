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

#include <gtest/gtest.h>

#include <ranges>
#include <set>

#include "cxlcache/engine.hh"
#include "cxlcache/explorer.hh"
#include "cxlcache/litmus.hh"
#include "support.hh"

namespace cxlcache {
namespace {

using namespace cxlcache::testing;

const std::vector<std::string> kRelaxationPath = {
    "InvalidStore1", "InvalidLoad2", "InvalidRdShared2", "SharedRdOwn1",
    "ISADSnpInv2",   "ISADGO+Data2", "MARspIHitI1",      "IMADGO+Data1"};

Limits checking(std::vector<std::string> props) {
  Limits lim;
  lim.properties = std::move(props);
  return lim;
}

TEST(Explore, FaithfulStoreLoadHolds) {
  const ExploreReport r = explore(faithful_catalog(), store_load_initial());
  EXPECT_FALSE(r.truncated);
  EXPECT_TRUE(r.all_hold());
  EXPECT_EQ(r.verdicts.size(), 5u);
  EXPECT_GT(r.reachable_count, 1u);
  EXPECT_GT(r.terminal_count, 0u);
}

TEST(Explore, RelaxedStoreLoadViolatesSwmr) {
  const ExploreReport r = explore(relaxed(Restriction::SnoopPushesGo),
                                  store_load_initial(), checking({"swmr"}));
  const Verdict* v = r.verdict("swmr");
  ASSERT_NE(v, nullptr);
  ASSERT_FALSE(v->holds());
  EXPECT_LE(v->witness->steps.size(), 8u);
  const SystemState& f = v->witness->final_state();
  const auto a = f.dev[0].cache.state, b = f.dev[1].cache.state;
  EXPECT_TRUE((a == DS::EM && b == DS::SH) || (a == DS::SH && b == DS::EM));
  EXPECT_EQ(v->witness->initial, store_load_initial());
}

TEST(Explore, EmptyPrograms) {
  const SystemState s = mk_initial_state({0, DS::I}, {0, DS::I}, {0, HS::I}, {}, {});
  const ExploreReport r = explore(faithful_catalog(), s);
  EXPECT_EQ(r.reachable_count, 1u);
  EXPECT_EQ(r.terminal_count, 1u);
  EXPECT_EQ(r.depth_reached, 0u);
  EXPECT_FALSE(r.truncated);
}

TEST(Explore, UnknownProperty) {
  EXPECT_THROW(explore(faithful_catalog(), store_load_initial(), checking({"bogus"})),
               UnknownProperty);
  EXPECT_THROW(find_violation(faithful_catalog(), store_load_initial(), "bogus"),
               UnknownProperty);
}

TEST(Explore, MaxStatesTruncates) {
  Limits lim;
  lim.max_states = 10;
  const ExploreReport r = explore(faithful_catalog(), store_load_initial(), lim);
  EXPECT_TRUE(r.truncated);
  EXPECT_EQ(r.reachable_count, 10u);
}

TEST(Explore, MaxDepthTruncates) {
  Limits lim;
  lim.max_depth = 2;
  const ExploreReport r = explore(faithful_catalog(), store_load_initial(), lim);
  EXPECT_TRUE(r.truncated);
  EXPECT_EQ(r.depth_reached, 2u);
}

TEST(Explore, OversizedChannelIsReportedNotExpanded) {
  SystemState s = store_load_initial();
  s.dev[0].dthreq = {{DthReqType::RdOwn, 0}, {DthReqType::RdOwn, 0}};
  const ExploreReport r = explore(faithful_catalog(), s);
  EXPECT_EQ(r.reachable_count, 1u);
  EXPECT_EQ(r.unexpanded_count, 1u);
  const Verdict* v = r.verdict("singleton_channels");
  ASSERT_FALSE(v->holds());
  EXPECT_TRUE(v->witness->steps.empty());
}

TEST(Explore, DeterministicAcrossThreads) {
  const auto c = relaxed(Restriction::SnoopPushesGo);
  for (const auto& t : builtin_suite()) {
    Limits one, four;
    four.threads = 4;
    ExploreReport a, b;
    const auto ga = explore_graph(c, t.initial(), one, builtin_properties(), &a);
    const auto gb = explore_graph(c, t.initial(), four, builtin_properties(), &b);
    EXPECT_EQ(ga.states, gb.states) << t.name;
    EXPECT_EQ(a.terminal_count, b.terminal_count);
    for (std::size_t p = 0; p < a.verdicts.size(); ++p)
      EXPECT_EQ(a.verdicts[p].witness, b.verdicts[p].witness) << t.name;
  }
}

TEST(Explore, WitnessesReplay) {
  const auto c = fully_relaxed();
  for (const auto& t : builtin_suite()) {
    const ExploreReport r = explore(c, t.initial());
    for (const auto& v : r.verdicts) {
      if (!v.witness) continue;
      EXPECT_FALSE(validate_trace(c, *v.witness).has_value()) << t.name << " " << v.property;
      EXPECT_FALSE(find_property(v.property).holds(v.witness->final_state()));
    }
  }
}

TEST(FindViolation, FaithfulNone) {
  EXPECT_FALSE(find_violation(faithful_catalog(), store_load_initial(), "swmr"));
  EXPECT_FALSE(find_violation(faithful_catalog(), store_load_initial(), "singleton_channels"));
}

TEST(FindViolation, RelaxedMatchesPublishedLength) {
  const auto c = relaxed(Restriction::SnoopPushesGo);
  const auto w = find_violation(c, store_load_initial(), "swmr");
  ASSERT_TRUE(w);
  EXPECT_EQ(w->steps.size(), kRelaxationPath.size());
  // The published sequence is one of the shortest witnesses.
  const Trace pub = run_schedule(c, store_load_initial(), kRelaxationPath);
  EXPECT_FALSE(swmr(pub.final_state()));
  for (const auto& st : pub.steps | std::views::take(7)) EXPECT_TRUE(swmr(st.state));
}

TEST(FindViolation, WitnessIsShortest) {
  // Independent check: the smallest depth at which the no-dedup oracle sees
  // a violating state.
  const auto c = relaxed(Restriction::SnoopPushesGo);
  const auto w = find_violation(c, store_load_initial(), "swmr");
  ASSERT_TRUE(w);
  std::size_t first = 0;
  for (std::size_t d = 0; d <= w->steps.size(); ++d) {
    const StateSet s = enumerate_oracle(c, store_load_initial(), d);
    if (std::any_of(s.begin(), s.end(), [](const SystemState& x) { return !swmr(x); })) {
      first = d;
      break;
    }
  }
  EXPECT_EQ(first, w->steps.size());
}

TEST(Oracle, DepthZero) {
  const StateSet s = enumerate_oracle(faithful_catalog(), clean_evict_initial(), 0);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_TRUE(s.count(clean_evict_initial()));
}

TEST(Oracle, CleanEvictRowFour) {
  const auto& c = faithful_catalog();
  const Trace t = run_schedule(c, clean_evict_initial(),
                               {"SharedEvict1", "Shared_CleanEvict_NotLastDrop1",
                                "SIA_GO_WritePullDrop1"});
  EXPECT_TRUE(enumerate_oracle(c, clean_evict_initial(), 3).count(t.final_state()));
}

class OracleEquivalence : public ::testing::TestWithParam<std::size_t> {};

TEST_P(OracleEquivalence, BfsSliceEqualsOracle) {
  const std::size_t depth = GetParam();
  for (const auto& t : builtin_suite()) {
    const RuleCatalog c = build_catalog(t.relax);
    EXPECT_EQ(bfs_slice(c, t.initial(), depth), enumerate_oracle(c, t.initial(), depth))
        << t.name << " at depth " << depth;
  }
}

INSTANTIATE_TEST_SUITE_P(Depths, OracleEquivalence, ::testing::Values(0, 1, 2, 3, 4, 5, 6));

TEST(Fingerprint, NoCollisionsOnRelaxationInstance) {
  const auto c = relaxed(Restriction::SnoopPushesGo);
  const SystemState init =
      mk_initial_state({-1, DS::I}, {-1, DS::I}, {0, HS::I}, {I::Store}, {I::Load});
  const StateSet exact = enumerate_oracle(c, init, 9);
  std::set<std::uint64_t> keys;
  for (const auto& s : exact) keys.insert(state_fingerprint(s));
  EXPECT_EQ(keys.size(), exact.size());
  EXPECT_GT(exact.size(), 100u);
}

TEST(Canonical, AgreesWithExactOnFiniteInstances) {
  for (const auto& init : {clean_evict_initial(), dirty_evict_initial()}) {
    Limits exact;
    exact.canonical_utids = false;
    const ExploreReport a = explore(faithful_catalog(), init);
    const ExploreReport b = explore(faithful_catalog(), init, exact);
    EXPECT_FALSE(b.truncated);
    EXPECT_EQ(a.terminal_count, b.terminal_count);
    for (std::size_t p = 0; p < a.verdicts.size(); ++p)
      EXPECT_EQ(a.verdicts[p].holds(), b.verdicts[p].holds());
  }
}

TEST(PathTo, RebuildsTraces) {
  const auto& c = faithful_catalog();
  const auto g = explore_graph(c, store_load_initial(), {}, {});
  for (std::size_t i = 0; i < g.states.size(); i += 7) {
    const Trace t = g.path_to(c, i);
    EXPECT_EQ(t.steps.size(), g.nodes[i].depth);
    EXPECT_EQ(t.final_state(), g.states[i]);
    EXPECT_FALSE(validate_trace(c, t).has_value());
  }
}

}  // namespace
}  // namespace cxlcache
