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

#include "cxlcache/invariants.hh"

#include <algorithm>
#include <sstream>
#include <thread>

namespace cxlcache {

namespace {

using DS = DeviceState;

bool in(DS s, std::initializer_list<DS> set) {
  return std::find(set.begin(), set.end(), s) != set.end();
}

bool transient_swmr_from(const SystemState& s, DeviceId d) {
  const auto& w = s[d];
  const auto& r = s[d.other()];
  const bool writer = in(w.cache.state, {DS::IMD, DS::SMD}) ||
                      (in(w.cache.state, {DS::IMAD, DS::SMAD}) && !w.htdrsp.empty());
  if (!writer) return true;
  if (!r.htdreq.empty() && r.htdreq.front().type == HtdReqType::SnpInv)
    return true;
  return !in(r.cache.state, {DS::ISD, DS::IMD, DS::SMD, DS::ISA, DS::IMA,
                             DS::SMA, DS::SH, DS::EM}) &&
         r.htddata.empty() &&
         (!in(r.cache.state, {DS::ISAD, DS::IMAD, DS::SMAD}) || r.htdrsp.empty());
}

bool honest_snoop_at(const SystemState& s, DeviceId d) {
  const auto& side = s[d];
  if (side.dthrsp.empty()) return true;
  const auto t = side.dthrsp.front().type;
  if (t != DthRespType::RspIFwdM && t != DthRespType::RspIHitSE) return true;
  return in(side.cache.state, {DS::I, DS::ISDI, DS::ISAD, DS::IMAD, DS::IIA});
}

}  // namespace

bool swmr(const SystemState& s) {
  auto a = s.dev[0].cache.state;
  auto b = s.dev[1].cache.state;
  return !((a == DS::EM && in(b, {DS::SH, DS::EM})) ||
           (b == DS::EM && in(a, {DS::SH, DS::EM})));
}

bool transient_swmr(const SystemState& s) {
  return transient_swmr_from(s, DeviceId::One()) &&
         transient_swmr_from(s, DeviceId::Two());
}

bool honest_snoop(const SystemState& s) {
  return honest_snoop_at(s, DeviceId::One()) &&
         honest_snoop_at(s, DeviceId::Two());
}

bool singleton_channels(const SystemState& s) {
  for (const auto& d : s.dev) {
    if (d.dthreq.size() > 1 || d.dthrsp.size() > 1 || d.dthdata.size() > 1 ||
        d.htdreq.size() > 1 || d.htdrsp.size() > 1 || d.htddata.size() > 1)
      return false;
  }
  return true;
}

bool data_no_conflict(const SystemState& s) {
  return (s.dev[0].dthdata.empty() || s.dev[1].htddata.empty()) &&
         (s.dev[1].dthdata.empty() || s.dev[0].htddata.empty());
}

const std::vector<PropertyDef>& builtin_properties() {
  static const std::vector<PropertyDef> props = {
      {"swmr", swmr, "no device in EM while the other is in SH or EM"},
      {"transient_swmr", transient_swmr,
       "a granted writer excludes readers unless a SnpInv is pending for them"},
      {"honest_snoop", honest_snoop,
       "RspIFwdM/RspIHitSE only from I, ISDI, ISAD, IMAD or IIA"},
      {"singleton_channels", singleton_channels,
       "every channel holds at most one message"},
      {"data_no_conflict", data_no_conflict,
       "dthdata of one device and htddata of the other are not both non-empty"},
  };
  return props;
}

const PropertyDef& find_property(std::string_view name) {
  for (const auto& p : builtin_properties())
    if (p.name == name) return p;
  throw UnknownProperty(std::string(name));
}

std::vector<PropertyDef> select_properties(const std::vector<std::string>& names) {
  if (names.empty()) return builtin_properties();
  std::vector<PropertyDef> out;
  for (const auto& n : names) out.push_back(find_property(n));
  return out;
}

bool MatrixReport::all_pass() const {
  return std::all_of(cells.begin(), cells.end(),
                     [](const MatrixCell& c) { return c.pass(); });
}

std::vector<std::pair<std::size_t, std::size_t>> MatrixReport::failures() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t r = 0; r < rules.size(); ++r)
    for (std::size_t p = 0; p < properties.size(); ++p)
      if (!cell(r, p).pass()) out.emplace_back(r, p);
  return out;
}

namespace {

struct Partial {
  std::vector<MatrixCell> cells;
  std::size_t checked = 0;
  std::size_t skipped = 0;
};

void check_range(const RuleCatalog& c, const std::vector<PropertyDef>& props,
                 const std::vector<SystemState>& states, std::size_t begin,
                 std::size_t end, Partial& out) {
  const std::size_t np = props.size();
  out.cells.assign(c.size() * np, {});
  for (std::size_t i = begin; i < end; ++i) {
    const SystemState& pre = states[i];
    const bool ok = std::all_of(props.begin(), props.end(),
                                [&pre](const PropertyDef& p) { return p.holds(pre); });
    if (!ok) {
      ++out.skipped;
      continue;
    }
    ++out.checked;
    for (const auto& rule : c.rules()) {
      if (!guard_holds(rule, pre)) continue;
      SystemState post = apply_rule(rule, pre);
      for (std::size_t p = 0; p < np; ++p) {
        MatrixCell& cell = out.cells[rule.id * np + p];
        ++cell.checked;
        if (!cell.failure && !props[p].holds(post))
          cell.failure = MatrixFailure{i, pre, post};
      }
    }
  }
}

}  // namespace

MatrixReport matrix_check(const RuleCatalog& c,
                          const std::vector<PropertyDef>& props,
                          const std::vector<SystemState>& states,
                          unsigned threads) {
  MatrixReport m;
  for (const auto& r : c.rules()) m.rules.push_back(r.name);
  for (const auto& p : props) m.properties.push_back(p.name);
  m.cells.assign(m.rules.size() * m.properties.size(), {});

  const std::size_t n = states.size();
  const std::size_t workers = std::max<std::size_t>(
      1, std::min<std::size_t>(threads == 0 ? 1 : threads, n == 0 ? 1 : n));
  std::vector<Partial> parts(workers);
  if (workers == 1) {
    check_range(c, props, states, 0, n, parts[0]);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t b = std::min(n, w * chunk);
      const std::size_t e = std::min(n, b + chunk);
      pool.emplace_back([&, w, b, e] { check_range(c, props, states, b, e, parts[w]); });
    }
    for (auto& t : pool) t.join();
  }
  // Chunks are in source order, so the first failure seen is the earliest.
  for (const auto& part : parts) {
    m.states_checked += part.checked;
    m.states_skipped += part.skipped;
    for (std::size_t k = 0; k < m.cells.size(); ++k) {
      m.cells[k].checked += part.cells[k].checked;
      if (!m.cells[k].failure && part.cells[k].failure)
        m.cells[k].failure = part.cells[k].failure;
    }
  }
  return m;
}

std::string matrix_markdown(const MatrixReport& m) {
  std::ostringstream os;
  os << "| rule |";
  for (const auto& p : m.properties) os << " " << p << " |";
  os << "\n|---|";
  for (std::size_t p = 0; p < m.properties.size(); ++p) os << "---|";
  os << "\n";
  for (std::size_t r = 0; r < m.rules.size(); ++r) {
    os << "| " << m.rules[r] << " |";
    for (std::size_t p = 0; p < m.properties.size(); ++p) {
      const auto& c = m.cell(r, p);
      if (!c.pass()) os << " FAIL |";
      else if (c.checked == 0) os << " - |";
      else os << " pass |";
    }
    os << "\n";
  }
  os << "\nstates checked: " << m.states_checked
     << ", skipped (some property false): " << m.states_skipped << "\n";
  return os.str();
}

}  // namespace cxlcache
