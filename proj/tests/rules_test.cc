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

#include <fstream>
#include <set>
#include <sstream>

#include "cxlcache/engine.hh"
#include "cxlcache/rules.hh"
#include "support.hh"

namespace cxlcache {
namespace {

using namespace cxlcache::testing;

std::vector<std::string> enabled_names(const RuleCatalog& c, const SystemState& s) {
  std::vector<std::string> out;
  for (auto id : enabled_rules(c, s)) out.push_back(c.at(id).name);
  return out;
}

bool has_guard(const Rule& r, const std::string& text) {
  for (const auto& g : r.guards)
    if (g.text == text) return true;
  return false;
}

TEST(Catalog, SizeAndUniqueNames) {
  const auto& c = faithful_catalog();
  EXPECT_EQ(c.size(), 130u);
  std::set<std::string> names;
  for (const auto& r : c.rules()) names.insert(r.name);
  EXPECT_EQ(names.size(), c.size());
}

TEST(Catalog, PublishedRulesPresent) {
  const auto& c = faithful_catalog();
  ASSERT_EQ(published_rule_names().size(), 18u);
  for (const auto& n : published_rule_names()) {
    const Rule* r = c.find(n);
    ASSERT_NE(r, nullptr) << n;
    EXPECT_EQ(r->origin, "published") << n;
  }
}

TEST(Catalog, InstancesComeInDevicePairs) {
  const auto& c = faithful_catalog();
  for (std::size_t i = 0; i + 1 < c.size(); i += 2) {
    const Rule& a = c.at(i);
    const Rule& b = c.at(i + 1);
    EXPECT_EQ(base_name(a), base_name(b));
    EXPECT_EQ(a.device, DeviceId::One());
    EXPECT_EQ(b.device, DeviceId::Two());
    EXPECT_EQ(a.family, b.family);
    EXPECT_EQ(a.relaxable(), b.relaxable());
  }
}

TEST(Catalog, RelaxationKeepsInventory) {
  const auto& f = faithful_catalog();
  const auto r = fully_relaxed();
  ASSERT_EQ(f.size(), r.size());
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_EQ(f.at(i).name, r.at(i).name);
}

TEST(Catalog, SharedSnpInvGuardIsTagged) {
  const Rule& r = faithful_catalog().get("SharedSnpInv1");
  ASSERT_TRUE(has_guard(r, "htdrsp1 = []"));
  bool tagged = false;
  for (const auto& g : r.guards)
    if (g.text == "htdrsp1 = []") tagged = g.restriction == Restriction::SnoopPushesGo;
  EXPECT_TRUE(tagged);
}

TEST(Catalog, RelaxedIsadSnpInvDropsGuard) {
  EXPECT_TRUE(has_guard(faithful_catalog().get("ISADSnpInv2"), "htdrsp2 = []"));
  const auto c = relaxed(Restriction::SnoopPushesGo);
  const Rule& r = c.get("ISADSnpInv2");
  EXPECT_FALSE(has_guard(r, "htdrsp2 = []"));
  ASSERT_EQ(r.relaxed_guards.size(), 1u);
  EXPECT_EQ(r.relaxed_guards.front().text, "htdrsp2 = []");
}

TEST(Catalog, EveryStableStateInstructionPairHandled) {
  // Per device: exactly one issue or hit rule per (stable state, instruction),
  // except SH x Evict (two flavours of clean evict) and I x Evict (none).
  const auto& c = faithful_catalog();
  for (auto st : {DS::I, DS::SH, DS::EM}) {
    for (auto ins : {I::Load, I::Store, I::Evict}) {
      SystemState s = mk_initial_state({0, st}, {0, DS::I}, {0, HS::I}, {ins}, {});
      int n = 0;
      for (auto id : enabled_rules(c, s)) {
        const auto fam = c.at(id).family;
        if (c.at(id).device == DeviceId::One() &&
            (fam == RuleFamily::InstrIssue || fam == RuleFamily::LocalHit))
          ++n;
      }
      const int expected = (ins == I::Evict && st == DS::SH) ? 2
                           : (ins == I::Evict && st == DS::I) ? 0
                                                              : 1;
      EXPECT_EQ(n, expected) << to_string(st) << " x " << to_string(ins);
    }
  }
}

TEST(Catalog, UnknownRule) {
  EXPECT_EQ(faithful_catalog().find("NoSuchRule"), nullptr);
  EXPECT_THROW(faithful_catalog().get("NoSuchRule"), UnknownRule);
}

TEST(GuardHolds, Examples) {
  const auto& c = faithful_catalog();
  const SystemState s = clean_evict_initial();
  EXPECT_FALSE(guard_holds(c.get("InvalidLoad1"), s));
  EXPECT_TRUE(guard_holds(c.get("SharedEvict1"), s));
}

TEST(GuardHolds, SnoopBehindGo) {
  SystemState s = mk_initial_state({0, DS::SH}, {0, DS::I}, {0, HS::I}, {}, {});
  s.dev[0].htdreq.push_back({HtdReqType::SnpInv, 0});
  s.dev[0].htdrsp.push_back({HtdRespType::GO, DS::SH, 1});
  EXPECT_FALSE(guard_holds(faithful_catalog().get("SharedSnpInv1"), s));
  EXPECT_TRUE(guard_holds(relaxed(Restriction::SnoopPushesGo).get("SharedSnpInv1"), s));
}

TEST(ApplyRule, SharedEvict1) {
  const SystemState pre = clean_evict_initial();
  const SystemState post = apply_rule(faithful_catalog().get("SharedEvict1"), pre);
  SystemState expect = pre;
  expect.dev[0].cache = {0, DS::SIA};
  expect.dev[0].dthreq = {{DthReqType::CleanEvict, 1}};
  expect.counter = 1;
  EXPECT_EQ(post, expect);
}

TEST(ApplyRule, MiaGoWritePull1) {
  const auto& c = faithful_catalog();
  const Trace t = run_schedule(c, dirty_evict_initial(),
                               {"ModifiedEvict1", "HostModifiedDirtyEvict1"});
  const SystemState post = apply_rule(c.get("MIA_GO_WritePull1"), t.final_state());
  EXPECT_EQ(post.dev[0].cache, (DeviceLine{1, DS::I}));
  EXPECT_TRUE(post.dev[0].prog.empty());
  EXPECT_EQ(post.dev[0].dthdata, (Channel<DataMsg>{{1, 1}}));
  EXPECT_TRUE(post.dev[0].htdrsp.empty());
}

TEST(ApplyRule, IdData1) {
  const auto& c = faithful_catalog();
  const Trace t = run_schedule(c, dirty_evict_initial(),
                               {"ModifiedEvict1", "HostModifiedDirtyEvict1",
                                "MIA_GO_WritePull1"});
  const SystemState post = apply_rule(c.get("IDData1"), t.final_state());
  EXPECT_EQ(post.host, (HostLine{1, HS::I}));
  EXPECT_TRUE(post.dev[0].dthdata.empty());
}

TEST(ApplyRule, NotEnabledThrows) {
  EXPECT_THROW(apply_rule(faithful_catalog().get("InvalidLoad1"), clean_evict_initial()),
               RuleNotEnabled);
}

TEST(ApplyRule, HostModifiedDirtyEvictShape) {
  const auto& c = faithful_catalog();
  const SystemState row2 = apply_rule(c.get("ModifiedEvict1"), dirty_evict_initial());
  const SystemState post = apply_rule(c.get("HostModifiedDirtyEvict1"), row2);
  EXPECT_EQ(post.host.state, HS::ID);
  EXPECT_TRUE(post.dev[0].dthreq.empty());
  EXPECT_EQ(post.dev[0].htdrsp, (Channel<HtdResp>{{HtdRespType::GO_WritePull, DS::I, 1}}));
  EXPECT_TRUE(std::holds_alternative<std::monostate>(post.dev[0].buffer));
}

// Enabled sets below were worked out by hand from the guard tables and
// frozen here.
TEST(EnabledRules, CleanEvictInitial) {
  EXPECT_EQ(enabled_names(faithful_catalog(), clean_evict_initial()),
            (std::vector<std::string>{"SharedEvict1", "SharedEvictNoData1"}));
}

TEST(EnabledRules, DirtyEvictRows) {
  const auto& c = faithful_catalog();
  EXPECT_EQ(enabled_names(c, dirty_evict_initial()),
            (std::vector<std::string>{"ModifiedEvict1"}));
  const SystemState row2 = apply_rule(c.get("ModifiedEvict1"), dirty_evict_initial());
  EXPECT_EQ(enabled_names(c, row2), (std::vector<std::string>{"HostModifiedDirtyEvict1"}));
}

TEST(EnabledRules, StoreLoadInitial) {
  EXPECT_EQ(enabled_names(faithful_catalog(), store_load_initial()),
            (std::vector<std::string>{"InvalidLoad2", "InvalidStore1"}));
}

TEST(EnabledRules, QuiescentIsEmpty) {
  for (auto a : {DS::I, DS::SH, DS::EM}) {
    for (auto b : {DS::I, DS::SH, DS::EM}) {
      for (auto h : {HS::I, HS::SH, HS::EM}) {
        const SystemState s = mk_initial_state({0, a}, {0, b}, {0, h}, {}, {});
        EXPECT_TRUE(enabled_rules(faithful_catalog(), s).empty());
      }
    }
  }
}

TEST(EnabledRules, AscendingIds) {
  StateGen gen(5);
  for (int i = 0; i < 200; ++i) {
    const auto en = enabled_rules(faithful_catalog(), gen.state());
    EXPECT_TRUE(std::is_sorted(en.begin(), en.end()));
  }
}

TEST(CatalogDoc, MatchesCommittedReference) {
  std::ifstream in(std::string(CXLCACHE_SOURCE_DIR) + "/docs/catalog.md");
  ASSERT_TRUE(in) << "docs/catalog.md missing";
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), catalog_markdown(faithful_catalog()));
}

TEST(CatalogDoc, DocumentsEveryRule) {
  const std::string doc = catalog_markdown(faithful_catalog());
  for (const auto& r : faithful_catalog().rules()) {
    const auto at = doc.find("## " + r.name + "\n");
    ASSERT_NE(at, std::string::npos) << r.name;
    const auto section = doc.substr(at, doc.find("\n## ", at + 1) - at);
    EXPECT_NE(section.find("- family: " + std::string(to_string(r.family))),
              std::string::npos);
    EXPECT_NE(section.find("- relaxable guards:"), std::string::npos);
  }
  EXPECT_NE(doc.find("Rule instances: 130"), std::string::npos);
}

}  // namespace
}  // namespace cxlcache
