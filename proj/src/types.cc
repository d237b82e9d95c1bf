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

#include "cxlcache/types.hh"

#include <algorithm>
#include <map>
#include <sstream>

namespace cxlcache {

namespace {

template <class E, std::size_t N>
E parse_enum(std::string_view s, const std::array<std::string_view, N>& names,
             const char* what) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == s) return static_cast<E>(i);
  }
  throw std::invalid_argument(std::string("unknown ") + what + " '" +
                              std::string(s) + "'");
}

constexpr std::array<std::string_view, 17> kDeviceStateNames = {
    "I",   "SH",  "EM",  "IMAD", "IMA", "IMD", "SMAD", "SMD", "SMA",
    "ISD", "ISAD", "ISA", "MIA", "SIA", "IIA", "SIAC", "ISDI"};
constexpr std::array<std::string_view, 13> kHostStateNames = {
    "I", "SH", "EM", "MAD", "MA", "MD", "SAD", "SD", "SA", "ID", "IB", "SB",
    "MB"};
constexpr std::array<std::string_view, 5> kDthReqNames = {
    "RdShared", "RdOwn", "CleanEvict", "DirtyEvict", "CleanEvictNoData"};
constexpr std::array<std::string_view, 4> kDthRespNames = {
    "RspIHitSE", "RspIFwdM", "RspSFwdM", "RspIHitI"};
constexpr std::array<std::string_view, 2> kHtdReqNames = {"SnpData", "SnpInv"};
constexpr std::array<std::string_view, 3> kHtdRespNames = {
    "GO", "GO_WritePull", "GO_WritePullDrop"};
constexpr std::array<std::string_view, 3> kInstructionNames = {"Load", "Store",
                                                               "Evict"};
constexpr std::array<std::string_view, kFieldCount> kFieldNames = {
    "dprog1",   "dprog2",   "devcache1", "devcache2", "dthreq1",
    "dthreq2",  "dthrsp1",  "dthrsp2",   "dthdata1",  "dthdata2",
    "htdreq1",  "htdreq2",  "htdrsp1",   "htdrsp2",   "htddata1",
    "htddata2", "dbuffer1", "dbuffer2",  "hcache",    "counter"};

template <class Msg>
std::string render_channel(const Channel<Msg>& ch) {
  std::string out = "[";
  for (std::size_t i = 0; i < ch.size(); ++i) {
    if (i) out += ", ";
    out += to_string(ch[i]);
  }
  return out + "]";
}

inline void mix(std::uint64_t& h, std::uint64_t v) {
  // splitmix64 finaliser over the running value
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h ^= h >> 30;
  h *= 0xbf58476d1ce4e5b9ULL;
  h ^= h >> 27;
  h *= 0x94d049bb133111ebULL;
  h ^= h >> 31;
}

template <class F>
void for_each_utid(SystemState& s, F&& f) {
  for (auto& side : s.dev) {
    for (auto& m : side.dthreq) f(m.utid);
    for (auto& m : side.dthrsp) f(m.utid);
    for (auto& m : side.dthdata) f(m.utid);
    for (auto& m : side.htdreq) f(m.utid);
    for (auto& m : side.htdrsp) f(m.utid);
    for (auto& m : side.htddata) f(m.utid);
    if (auto* r = std::get_if<HtdResp>(&side.buffer)) f(r->utid);
    if (auto* q = std::get_if<HtdReq>(&side.buffer)) f(q->utid);
  }
}

}  // namespace

std::string_view to_string(DeviceState s) {
  return kDeviceStateNames[static_cast<std::size_t>(s)];
}
std::string_view to_string(HostState s) {
  return kHostStateNames[static_cast<std::size_t>(s)];
}
std::string_view to_string(DthReqType t) {
  return kDthReqNames[static_cast<std::size_t>(t)];
}
std::string_view to_string(DthRespType t) {
  return kDthRespNames[static_cast<std::size_t>(t)];
}
std::string_view to_string(HtdReqType t) {
  return kHtdReqNames[static_cast<std::size_t>(t)];
}
std::string_view to_string(HtdRespType t) {
  return kHtdRespNames[static_cast<std::size_t>(t)];
}
std::string_view to_string(Instruction i) {
  return kInstructionNames[static_cast<std::size_t>(i)];
}

DeviceState parse_device_state(std::string_view s) {
  return parse_enum<DeviceState>(s, kDeviceStateNames, "device state");
}
HostState parse_host_state(std::string_view s) {
  return parse_enum<HostState>(s, kHostStateNames, "host state");
}
DthReqType parse_dthreq_type(std::string_view s) {
  return parse_enum<DthReqType>(s, kDthReqNames, "D2H request type");
}
DthRespType parse_dthresp_type(std::string_view s) {
  return parse_enum<DthRespType>(s, kDthRespNames, "D2H response type");
}
HtdReqType parse_htdreq_type(std::string_view s) {
  return parse_enum<HtdReqType>(s, kHtdReqNames, "H2D request type");
}
HtdRespType parse_htdresp_type(std::string_view s) {
  return parse_enum<HtdRespType>(s, kHtdRespNames, "H2D response type");
}
Instruction parse_instruction(std::string_view s) {
  return parse_enum<Instruction>(s, kInstructionNames, "instruction");
}

std::string to_string(const DthReq& m) {
  return "(" + std::string(to_string(m.type)) + ", " + std::to_string(m.utid) +
         ")";
}
std::string to_string(const DthResp& m) {
  return "(" + std::string(to_string(m.type)) + ", " + std::to_string(m.utid) +
         ")";
}
std::string to_string(const HtdReq& m) {
  return "(" + std::string(to_string(m.type)) + ", " + std::to_string(m.utid) +
         ")";
}
std::string to_string(const HtdResp& m) {
  return "(" + std::string(to_string(m.type)) + ", " +
         std::string(to_string(m.state)) + ", " + std::to_string(m.utid) + ")";
}
std::string to_string(const DataMsg& m) {
  return "(Data(" + std::to_string(m.val) + "), " + std::to_string(m.utid) +
         ")";
}
std::string to_string(const BufferEntry& b) {
  if (auto* r = std::get_if<HtdResp>(&b)) return to_string(*r);
  if (auto* q = std::get_if<HtdReq>(&b)) return to_string(*q);
  return "⊥";
}
std::string to_string(const DeviceLine& l) {
  return "(" + std::to_string(l.val) + ", " + std::string(to_string(l.state)) +
         ")";
}
std::string to_string(const HostLine& l) {
  return "(" + std::to_string(l.val) + ", " + std::string(to_string(l.state)) +
         ")";
}
std::string to_string(const Program& p) {
  std::string out = "[";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ", ";
    out += to_string(p[i]);
  }
  return out + "]";
}

const std::vector<DeviceState>& all_device_states() {
  static const std::vector<DeviceState> v = [] {
    std::vector<DeviceState> r;
    for (std::size_t i = 0; i < kDeviceStateNames.size(); ++i)
      r.push_back(static_cast<DeviceState>(i));
    return r;
  }();
  return v;
}

const std::vector<HostState>& all_host_states() {
  static const std::vector<HostState> v = [] {
    std::vector<HostState> r;
    for (std::size_t i = 0; i < kHostStateNames.size(); ++i)
      r.push_back(static_cast<HostState>(i));
    return r;
  }();
  return v;
}

bool is_stable(DeviceState s) {
  return s == DeviceState::I || s == DeviceState::SH || s == DeviceState::EM;
}
bool is_stable(HostState s) {
  return s == HostState::I || s == HostState::SH || s == HostState::EM;
}

bool ValueDomain::contains(Val v) const {
  return std::find(values_.begin(), values_.end(), v) != values_.end();
}

Field device_field(DevField f, DeviceId d) {
  const auto i = d.index();
  switch (f) {
    case DevField::Prog: return i ? Field::dprog2 : Field::dprog1;
    case DevField::Cache: return i ? Field::devcache2 : Field::devcache1;
    case DevField::DthReq: return i ? Field::dthreq2 : Field::dthreq1;
    case DevField::DthRsp: return i ? Field::dthrsp2 : Field::dthrsp1;
    case DevField::DthData: return i ? Field::dthdata2 : Field::dthdata1;
    case DevField::HtdReq: return i ? Field::htdreq2 : Field::htdreq1;
    case DevField::HtdRsp: return i ? Field::htdrsp2 : Field::htdrsp1;
    case DevField::HtdData: return i ? Field::htddata2 : Field::htddata1;
    case DevField::Buffer: return i ? Field::dbuffer2 : Field::dbuffer1;
  }
  throw std::logic_error("bad DevField");
}

std::string_view field_name(Field f) {
  return kFieldNames[static_cast<std::size_t>(f)];
}

std::optional<Field> parse_field(std::string_view name) {
  for (std::size_t i = 0; i < kFieldNames.size(); ++i) {
    if (kFieldNames[i] == name) return static_cast<Field>(i);
  }
  return std::nullopt;
}

const std::array<Field, kFieldCount>& all_fields() {
  static const std::array<Field, kFieldCount> fields = [] {
    std::array<Field, kFieldCount> r{};
    for (std::size_t i = 0; i < kFieldCount; ++i) r[i] = static_cast<Field>(i);
    return r;
  }();
  return fields;
}

std::string render_field(const SystemState& s, Field f) {
  switch (f) {
    case Field::dprog1: return to_string(s.dev[0].prog);
    case Field::dprog2: return to_string(s.dev[1].prog);
    case Field::devcache1: return to_string(s.dev[0].cache);
    case Field::devcache2: return to_string(s.dev[1].cache);
    case Field::dthreq1: return render_channel(s.dev[0].dthreq);
    case Field::dthreq2: return render_channel(s.dev[1].dthreq);
    case Field::dthrsp1: return render_channel(s.dev[0].dthrsp);
    case Field::dthrsp2: return render_channel(s.dev[1].dthrsp);
    case Field::dthdata1: return render_channel(s.dev[0].dthdata);
    case Field::dthdata2: return render_channel(s.dev[1].dthdata);
    case Field::htdreq1: return render_channel(s.dev[0].htdreq);
    case Field::htdreq2: return render_channel(s.dev[1].htdreq);
    case Field::htdrsp1: return render_channel(s.dev[0].htdrsp);
    case Field::htdrsp2: return render_channel(s.dev[1].htdrsp);
    case Field::htddata1: return render_channel(s.dev[0].htddata);
    case Field::htddata2: return render_channel(s.dev[1].htddata);
    case Field::dbuffer1: return to_string(s.dev[0].buffer);
    case Field::dbuffer2: return to_string(s.dev[1].buffer);
    case Field::hcache: return to_string(s.host);
    case Field::counter: return std::to_string(s.counter);
  }
  throw std::logic_error("bad Field");
}

bool field_equal(const SystemState& a, const SystemState& b, Field f) {
  const auto i = static_cast<std::size_t>(f);
  if (f == Field::hcache) return a.host == b.host;
  if (f == Field::counter) return a.counter == b.counter;
  // Per-device fields come in (1, 2) pairs.
  const std::size_t d = i % 2;
  const auto& x = a.dev[d];
  const auto& y = b.dev[d];
  switch (f) {
    case Field::dprog1: case Field::dprog2: return x.prog == y.prog;
    case Field::devcache1: case Field::devcache2: return x.cache == y.cache;
    case Field::dthreq1: case Field::dthreq2: return x.dthreq == y.dthreq;
    case Field::dthrsp1: case Field::dthrsp2: return x.dthrsp == y.dthrsp;
    case Field::dthdata1: case Field::dthdata2: return x.dthdata == y.dthdata;
    case Field::htdreq1: case Field::htdreq2: return x.htdreq == y.htdreq;
    case Field::htdrsp1: case Field::htdrsp2: return x.htdrsp == y.htdrsp;
    case Field::htddata1: case Field::htddata2: return x.htddata == y.htddata;
    case Field::dbuffer1: case Field::dbuffer2: return x.buffer == y.buffer;
    default: break;
  }
  throw std::logic_error("bad Field");
}

SystemState mk_initial_state(DeviceLine dev1, DeviceLine dev2, HostLine host,
                             Program prog1, Program prog2) {
  if (!is_stable(dev1.state) || !is_stable(dev2.state) ||
      !is_stable(host.state)) {
    throw std::invalid_argument("initial cache states must be stable");
  }
  SystemState s;
  s.dev[0].cache = dev1;
  s.dev[1].cache = dev2;
  s.dev[0].prog = std::move(prog1);
  s.dev[1].prog = std::move(prog2);
  s.host = host;
  s.counter = 0;
  return s;
}

std::uint64_t state_fingerprint(const SystemState& s) {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  for (const auto& side : s.dev) {
    mix(h, side.prog.size());
    for (auto i : side.prog) mix(h, static_cast<std::uint64_t>(i));
    mix(h, static_cast<std::uint64_t>(side.cache.state));
    mix(h, static_cast<std::uint64_t>(static_cast<std::int64_t>(side.cache.val)));
    auto tagged = [&h](std::uint64_t tag, auto const& ch, auto&& enc) {
      mix(h, tag);
      mix(h, ch.size());
      for (const auto& m : ch) enc(m);
    };
    tagged(1, side.dthreq, [&](const DthReq& m) {
      mix(h, static_cast<std::uint64_t>(m.type));
      mix(h, m.utid);
    });
    tagged(2, side.dthrsp, [&](const DthResp& m) {
      mix(h, static_cast<std::uint64_t>(m.type));
      mix(h, m.utid);
    });
    auto data = [&](const DataMsg& m) {
      mix(h, m.utid);
      mix(h, static_cast<std::uint64_t>(static_cast<std::int64_t>(m.val)));
    };
    tagged(3, side.dthdata, data);
    tagged(4, side.htdreq, [&](const HtdReq& m) {
      mix(h, static_cast<std::uint64_t>(m.type));
      mix(h, m.utid);
    });
    auto resp = [&](const HtdResp& m) {
      mix(h, static_cast<std::uint64_t>(m.type));
      mix(h, static_cast<std::uint64_t>(m.state));
      mix(h, m.utid);
    };
    tagged(5, side.htdrsp, resp);
    tagged(6, side.htddata, data);
    mix(h, 7 + side.buffer.index());
    if (auto* r = std::get_if<HtdResp>(&side.buffer)) resp(*r);
    if (auto* q = std::get_if<HtdReq>(&side.buffer)) {
      mix(h, static_cast<std::uint64_t>(q->type));
      mix(h, q->utid);
    }
  }
  mix(h, static_cast<std::uint64_t>(s.host.state));
  mix(h, static_cast<std::uint64_t>(static_cast<std::int64_t>(s.host.val)));
  mix(h, s.counter);
  return h;
}

SystemState mirror(const SystemState& s) {
  SystemState m = s;
  std::swap(m.dev[0], m.dev[1]);
  return m;
}

std::vector<Utid> live_utids(const SystemState& s) {
  std::vector<Utid> out;
  SystemState copy = s;
  for_each_utid(copy, [&out](Utid& u) { out.push_back(u); });
  return out;
}

SystemState canonical_form(const SystemState& s) {
  SystemState c = s;
  std::vector<Utid> values = live_utids(s);
  values.push_back(s.counter);
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  auto rank = [&values](Utid u) {
    return static_cast<Utid>(
        std::lower_bound(values.begin(), values.end(), u) - values.begin());
  };
  for_each_utid(c, [&](Utid& u) { u = rank(u); });
  c.counter = rank(s.counter);
  return c;
}

}  // namespace cxlcache
