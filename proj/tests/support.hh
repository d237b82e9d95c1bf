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

#ifndef CXLCACHE_TESTS_SUPPORT_HH_
#define CXLCACHE_TESTS_SUPPORT_HH_

#include <array>
#include <random>
#include <vector>

#include "cxlcache/explorer.hh"
#include "cxlcache/litmus.hh"
#include "cxlcache/rules.hh"
#include "cxlcache/types.hh"

namespace cxlcache::testing {

using DS = DeviceState;
using HS = HostState;
using I = Instruction;

inline SystemState clean_evict_initial() {
  return mk_initial_state({0, DS::SH}, {0, DS::SH}, {0, HS::SH},
                          {I::Evict, I::Evict}, {});
}

inline SystemState dirty_evict_initial() {
  return mk_initial_state({1, DS::EM}, {0, DS::I}, {0, HS::EM}, {I::Evict}, {});
}

inline SystemState store_load_initial() {
  return mk_initial_state({0, DS::I}, {0, DS::I}, {0, HS::I}, {I::Store},
                          {I::Load});
}

inline RuleCatalog relaxed(Restriction r) {
  RelaxConfig cfg;
  cfg.relax(r);
  return build_catalog(cfg);
}

inline RuleCatalog fully_relaxed() {
  return build_catalog(RelaxConfig{false, false, false});
}

/// Arbitrary (not necessarily reachable) states with short channels.
class StateGen {
 public:
  explicit StateGen(std::uint64_t seed) : rng_(seed) {}

  int below(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  bool coin() { return below(2) == 0; }

  template <class T>
  const T& pick(const std::vector<T>& v) { return v[below(static_cast<int>(v.size()))]; }

  Val val() { return pick(ValueDomain().values()); }
  Utid utid() { return static_cast<Utid>(below(4)); }

  // Channel lengths are 0 or 1, occasionally 2.
  std::size_t length() {
    const int r = below(20);
    return r < 11 ? 0 : r < 19 ? 1 : 2;
  }

  SystemState state() {
    SystemState s;
    for (auto& d : s.dev) {
      for (int k = below(4); k > 0; --k)
        d.prog.push_back(static_cast<Instruction>(below(3)));
      d.cache = {val(), pick(all_device_states())};
      for (auto n = length(); n > 0; --n)
        d.dthreq.push_back({static_cast<DthReqType>(below(5)), utid()});
      for (auto n = length(); n > 0; --n)
        d.dthrsp.push_back({static_cast<DthRespType>(below(4)), utid()});
      for (auto n = length(); n > 0; --n) d.dthdata.push_back({utid(), val()});
      for (auto n = length(); n > 0; --n)
        d.htdreq.push_back({static_cast<HtdReqType>(below(2)), utid()});
      for (auto n = length(); n > 0; --n)
        d.htdrsp.push_back({static_cast<HtdRespType>(below(3)),
                            pick(std::vector<DS>{DS::I, DS::SH, DS::EM}), utid()});
      for (auto n = length(); n > 0; --n) d.htddata.push_back({utid(), val()});
      switch (below(3)) {
        case 0: d.buffer = std::monostate{}; break;
        case 1: d.buffer = HtdReq{static_cast<HtdReqType>(below(2)), utid()}; break;
        default:
          d.buffer = HtdResp{static_cast<HtdRespType>(below(3)), DS::I, utid()};
      }
    }
    s.host = {val(), pick(all_host_states())};
    s.counter = static_cast<Utid>(below(6));
    return s;
  }

  /// A random coherent stable initial configuration: shared copies agree
  /// with the host, an EM copy excludes every other copy.
  SystemState initial() {
    static const std::vector<std::array<int, 3>> shapes = {
        {0, 0, 0}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}, {2, 0, 2}, {0, 2, 2}};
    const auto& shape = pick(shapes);
    const Val hv = val();
    auto dev = [&](int k) {
      const DS st = k == 0 ? DS::I : k == 1 ? DS::SH : DS::EM;
      return DeviceLine{k == 1 ? hv : val(), st};
    };
    const HS hs = shape[2] == 0 ? HS::I : shape[2] == 1 ? HS::SH : HS::EM;
    Program p1, p2;
    for (int k = below(4); k > 0; --k) p1.push_back(static_cast<Instruction>(below(3)));
    for (int k = below(4); k > 0; --k) p2.push_back(static_cast<Instruction>(below(3)));
    return mk_initial_state(dev(shape[0]), dev(shape[1]), {hv, hs}, p1, p2);
  }

  /// A state reached by a random walk of up to `steps` firings.
  SystemState walk(const RuleCatalog& c, SystemState s, int steps) {
    for (int k = 0; k < steps; ++k) {
      auto en = enabled_rules(c, s);
      if (en.empty()) break;
      s = apply_rule(c.at(pick(en)), s);
    }
    return s;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// Reachable states of the built-in tests under the faithful catalog, plus
/// those under the fully relaxed catalog.
inline const std::vector<SystemState>& reachable_pool() {
  static const std::vector<SystemState> pool = [] {
    std::vector<SystemState> out;
    for (const RuleCatalog& c : {build_catalog(), fully_relaxed()}) {
      for (const auto& g : builtin_reachable(c))
        out.insert(out.end(), g.states.begin(), g.states.end());
    }
    return out;
  }();
  return pool;
}

}  // namespace cxlcache::testing

#endif  // CXLCACHE_TESTS_SUPPORT_HH_
