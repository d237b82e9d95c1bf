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

#include "cxlcache/engine.hh"
#include "cxlcache/json.hh"
#include "support.hh"

namespace cxlcache {
namespace {

using namespace cxlcache::testing;

const std::vector<std::string> kCleanEvict = {
    "SharedEvict1", "Shared_CleanEvict_NotLastDrop1", "SIA_GO_WritePullDrop1"};
const std::vector<std::string> kDirtyEvict = {
    "ModifiedEvict1", "HostModifiedDirtyEvict1", "MIA_GO_WritePull1", "IDData1"};

TEST(Step, Examples) {
  const auto& c = faithful_catalog();
  const SystemState s = step(c, clean_evict_initial(), "SharedEvict1");
  EXPECT_EQ(s.dev[0].cache.state, DS::SIA);
  EXPECT_THROW(step(c, clean_evict_initial(), "InvalidLoad1"), RuleNotEnabled);
  EXPECT_THROW(step(c, clean_evict_initial(), "NoSuchRule"), UnknownRule);
}

TEST(Step, ErrorsNameTheRule) {
  try {
    step(faithful_catalog(), clean_evict_initial(), "InvalidLoad1");
    FAIL();
  } catch (const RuleNotEnabled& e) {
    EXPECT_EQ(e.name(), "InvalidLoad1");
  }
}

TEST(RunSchedule, CleanEvict) {
  const Trace t = run_schedule(faithful_catalog(), clean_evict_initial(), kCleanEvict);
  ASSERT_EQ(t.steps.size(), 3u);
  const SystemState& f = t.final_state();
  EXPECT_EQ(f.dev[0].cache, (DeviceLine{0, DS::I}));
  EXPECT_EQ(f.dev[1].cache, (DeviceLine{0, DS::SH}));
  EXPECT_EQ(f.host, (HostLine{0, HS::SH}));
  EXPECT_EQ(f.counter, 1u);
  EXPECT_EQ(f.dev[0].prog, (Program{I::Evict}));
}

TEST(RunSchedule, DirtyEvict) {
  const Trace t = run_schedule(faithful_catalog(), dirty_evict_initial(), kDirtyEvict);
  const SystemState& f = t.final_state();
  EXPECT_EQ(f.dev[0].cache, (DeviceLine{1, DS::I}));
  EXPECT_EQ(f.host, (HostLine{1, HS::I}));
  EXPECT_EQ(f.dev[1].cache, (DeviceLine{0, DS::I}));
  for (const auto& d : f.dev) {
    EXPECT_TRUE(d.dthreq.empty() && d.dthrsp.empty() && d.dthdata.empty());
    EXPECT_TRUE(d.htdreq.empty() && d.htdrsp.empty() && d.htddata.empty());
  }
}

TEST(RunSchedule, Empty) {
  const Trace t = run_schedule(faithful_catalog(), clean_evict_initial(), {});
  EXPECT_TRUE(t.steps.empty());
  EXPECT_EQ(t.final_state(), clean_evict_initial());
}

TEST(RunSchedule, StuckCarriesContext) {
  const std::vector<std::string> bad = {"SharedEvict1", "SIA_GO_WritePullDrop1"};
  try {
    run_schedule(faithful_catalog(), clean_evict_initial(), bad);
    FAIL();
  } catch (const ScheduleStuck& e) {
    EXPECT_EQ(e.index(), 1u);
    EXPECT_EQ(e.rule(), "SIA_GO_WritePullDrop1");
    EXPECT_EQ(e.state().dev[0].cache.state, DS::SIA);
  }
}

TEST(RunSchedule, UnknownName) {
  EXPECT_THROW(run_schedule(faithful_catalog(), clean_evict_initial(), {"Bogus1"}),
               UnknownRule);
}

TEST(RunSchedule, Concatenation) {
  const auto& c = faithful_catalog();
  for (std::size_t cut = 0; cut <= kDirtyEvict.size(); ++cut) {
    std::vector<std::string> s1(kDirtyEvict.begin(), kDirtyEvict.begin() + cut);
    std::vector<std::string> s2(kDirtyEvict.begin() + cut, kDirtyEvict.end());
    const Trace whole = run_schedule(c, dirty_evict_initial(), kDirtyEvict);
    const Trace a = run_schedule(c, dirty_evict_initial(), s1);
    const Trace b = run_schedule(c, a.final_state(), s2);
    EXPECT_EQ(whole.final_state(), b.final_state());
  }
}

TEST(IsTerminal, Examples) {
  const auto& c = faithful_catalog();
  EXPECT_TRUE(is_terminal(c, mk_initial_state({0, DS::I}, {0, DS::I}, {0, HS::I}, {}, {})));
  EXPECT_FALSE(is_terminal(c, clean_evict_initial()));
  const Trace t = run_schedule(c, clean_evict_initial(), kCleanEvict);
  EXPECT_TRUE(is_terminal(c, t.final_state()));
}

TEST(ValidateTrace, AcceptsAndRejects) {
  const auto& c = faithful_catalog();
  Trace t = run_schedule(c, dirty_evict_initial(), kDirtyEvict);
  EXPECT_FALSE(validate_trace(c, t).has_value());
  Trace tampered = t;
  tampered.steps[2].state.host.val = 42;
  EXPECT_TRUE(validate_trace(c, tampered).has_value());
  Trace renamed = t;
  renamed.steps[0].rule = "Bogus1";
  EXPECT_TRUE(validate_trace(c, renamed).has_value());
}

TEST(TraceJson, Schema) {
  const Trace t = run_schedule(faithful_catalog(), clean_evict_initial(), kCleanEvict);
  const Json j = trace_to_json(t);
  ASSERT_TRUE(j.contains("initial"));
  ASSERT_EQ(j["steps"].size(), 3u);
  EXPECT_EQ(j["steps"][0]["rule"], "SharedEvict1");
  const Json& s = j["steps"][0]["state"];
  EXPECT_EQ(s["devcache1"]["state"], "SIA");
  EXPECT_EQ(s["dthreq1"][0]["type"], "CleanEvict");
  EXPECT_EQ(s["dthreq1"][0]["utid"], 1);
  EXPECT_TRUE(s["dbuffer1"].is_null());
  EXPECT_EQ(s.size(), 20u);
  EXPECT_EQ(trace_from_json(j), t);
}

TEST(TraceJson, GoldenDirtyEvictStep) {
  const Trace t = run_schedule(faithful_catalog(), dirty_evict_initial(), kDirtyEvict);
  const Json got = trace_to_json(t)["steps"][1]["state"];
  const Json expect = Json::parse(R"({
    "dprog1": ["Evict"], "dprog2": [],
    "devcache1": {"val": 1, "state": "MIA"}, "devcache2": {"val": 0, "state": "I"},
    "dthreq1": [], "dthreq2": [], "dthrsp1": [], "dthrsp2": [],
    "dthdata1": [], "dthdata2": [], "htdreq1": [], "htdreq2": [],
    "htdrsp1": [{"type": "GO_WritePull", "state": "I", "utid": 1}], "htdrsp2": [],
    "htddata1": [], "htddata2": [], "dbuffer1": null, "dbuffer2": null,
    "hcache": {"val": 0, "state": "ID"}, "counter": 1})");
  EXPECT_EQ(got, expect);
}

}  // namespace
}  // namespace cxlcache
