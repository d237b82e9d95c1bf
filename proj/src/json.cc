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

#include "cxlcache/json.hh"

#include <stdexcept>

namespace cxlcache {

namespace {

std::string str(std::string_view v) { return std::string(v); }

Json line_json(Val val, std::string_view state) {
  return Json{{"val", val}, {"state", str(state)}};
}

Json msg(const DthReq& m) {
  return Json{{"type", str(to_string(m.type))}, {"utid", m.utid}};
}
Json msg(const DthResp& m) {
  return Json{{"type", str(to_string(m.type))}, {"utid", m.utid}};
}
Json msg(const HtdReq& m) {
  return Json{{"type", str(to_string(m.type))}, {"utid", m.utid}};
}
Json msg(const HtdResp& m) {
  return Json{{"type", str(to_string(m.type))},
              {"state", str(to_string(m.state))},
              {"utid", m.utid}};
}
Json msg(const DataMsg& m) { return Json{{"utid", m.utid}, {"val", m.val}}; }

template <class T>
Json channel(const Channel<T>& ch) {
  Json arr = Json::array();
  for (const auto& m : ch) arr.push_back(msg(m));
  return arr;
}

Json buffer(const BufferEntry& b) {
  if (const auto* r = std::get_if<HtdResp>(&b)) return msg(*r);
  if (const auto* q = std::get_if<HtdReq>(&b)) return msg(*q);
  return nullptr;
}

const Json& member(const Json& j, const std::string& key) {
  auto it = j.find(key);
  if (it == j.end()) throw std::invalid_argument("missing field '" + key + "'");
  return *it;
}

Utid utid_of(const Json& j) { return member(j, "utid").get<Utid>(); }
std::string type_of(const Json& j) { return member(j, "type").get<std::string>(); }

template <class T, class Parse>
Channel<T> parse_channel(const Json& j, Parse parse) {
  if (!j.is_array()) throw std::invalid_argument("channel must be an array");
  Channel<T> out;
  for (const auto& m : j) out.push_back(parse(m));
  return out;
}

HtdResp parse_htdresp(const Json& m) {
  return {parse_htdresp_type(type_of(m)),
          parse_device_state(member(m, "state").get<std::string>()),
          utid_of(m)};
}

DataMsg parse_data(const Json& m) {
  return {utid_of(m), member(m, "val").get<Val>()};
}

BufferEntry parse_buffer(const Json& j) {
  if (j.is_null()) return std::monostate{};
  if (j.contains("state")) return parse_htdresp(j);
  return HtdReq{parse_htdreq_type(type_of(j)), utid_of(j)};
}

}  // namespace

Json state_to_json(const SystemState& s) {
  Json j = Json::object();
  for (DeviceId d : {DeviceId::One(), DeviceId::Two()}) {
    const auto& side = s[d];
    const std::string n = std::to_string(d.number());
    Json prog = Json::array();
    for (auto i : side.prog) prog.push_back(str(to_string(i)));
    j["dprog" + n] = prog;
    j["devcache" + n] = line_json(side.cache.val, to_string(side.cache.state));
    j["dthreq" + n] = channel(side.dthreq);
    j["dthrsp" + n] = channel(side.dthrsp);
    j["dthdata" + n] = channel(side.dthdata);
    j["htdreq" + n] = channel(side.htdreq);
    j["htdrsp" + n] = channel(side.htdrsp);
    j["htddata" + n] = channel(side.htddata);
    j["dbuffer" + n] = buffer(side.buffer);
  }
  j["hcache"] = line_json(s.host.val, to_string(s.host.state));
  j["counter"] = s.counter;
  return j;
}

SystemState state_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("state must be an object");
  SystemState s;
  try {
    for (DeviceId d : {DeviceId::One(), DeviceId::Two()}) {
      auto& side = s[d];
      const std::string n = std::to_string(d.number());
      for (const auto& i : member(j, "dprog" + n))
        side.prog.push_back(parse_instruction(i.get<std::string>()));
      const Json& line = member(j, "devcache" + n);
      side.cache.val = member(line, "val").get<Val>();
      side.cache.state =
          parse_device_state(member(line, "state").get<std::string>());
      side.dthreq = parse_channel<DthReq>(member(j, "dthreq" + n), [](const Json& m) {
        return DthReq{parse_dthreq_type(type_of(m)), utid_of(m)};
      });
      side.dthrsp = parse_channel<DthResp>(member(j, "dthrsp" + n), [](const Json& m) {
        return DthResp{parse_dthresp_type(type_of(m)), utid_of(m)};
      });
      side.dthdata = parse_channel<DataMsg>(member(j, "dthdata" + n), parse_data);
      side.htdreq = parse_channel<HtdReq>(member(j, "htdreq" + n), [](const Json& m) {
        return HtdReq{parse_htdreq_type(type_of(m)), utid_of(m)};
      });
      side.htdrsp = parse_channel<HtdResp>(member(j, "htdrsp" + n), parse_htdresp);
      side.htddata = parse_channel<DataMsg>(member(j, "htddata" + n), parse_data);
      side.buffer = parse_buffer(member(j, "dbuffer" + n));
    }
    const Json& host = member(j, "hcache");
    s.host.val = member(host, "val").get<Val>();
    s.host.state = parse_host_state(member(host, "state").get<std::string>());
    s.counter = member(j, "counter").get<Utid>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed state: ") + e.what());
  }
  return s;
}

Json trace_to_json(const Trace& t) {
  Json steps = Json::array();
  for (const auto& st : t.steps)
    steps.push_back(Json{{"rule", st.rule}, {"state", state_to_json(st.state)}});
  return Json{{"initial", state_to_json(t.initial)}, {"steps", steps}};
}

Trace trace_from_json(const Json& j) {
  Trace t;
  t.initial = state_from_json(member(j, "initial"));
  for (const auto& st : member(j, "steps")) {
    t.steps.push_back({member(st, "rule").get<std::string>(),
                       state_from_json(member(st, "state"))});
  }
  return t;
}

}  // namespace cxlcache
