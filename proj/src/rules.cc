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

#include "cxlcache/rules.hh"

#include <algorithm>
#include <initializer_list>
#include <set>
#include <sstream>

namespace cxlcache {

namespace {

using DS = DeviceState;
using HS = HostState;

std::string subst(std::string text, DeviceId d) {
  auto replace = [&text](const std::string& from, const std::string& to) {
    for (std::size_t pos = 0;
         (pos = text.find(from, pos)) != std::string::npos;
         pos += to.size()) {
      text.replace(pos, from.size(), to);
    }
  };
  replace("{d}", std::to_string(d.number()));
  replace("{o}", std::to_string(d.other().number()));
  return text;
}

class Builder {
 public:
  Builder(std::string base, DeviceId d, RuleFamily family) : d_(d) {
    rule_.name = base + std::to_string(d.number());
    rule_.device = d;
    rule_.family = family;
  }

  Builder& when(const std::string& text, StatePredicate p,
                std::optional<Restriction> r = std::nullopt) {
    rule_.guards.push_back({subst(text, d_), std::move(p), r});
    return *this;
  }

  Builder& then(Field target, const std::string& text,
                std::function<void(const SystemState&, SystemState&)> fn) {
    rule_.effects.push_back({target, subst(text, d_), std::move(fn)});
    return *this;
  }

  Builder& tracking() {
    rule_.tracking = true;
    return *this;
  }

  Builder& published() {
    rule_.origin = "published";
    return *this;
  }

  Rule build() { return std::move(rule_); }

 private:
  DeviceId d_;
  Rule rule_;
};

// ---- guard predicates ----------------------------------------------------

StatePredicate dev_in(DeviceId d, std::initializer_list<DS> states) {
  std::vector<DS> v(states);
  return [d, v](const SystemState& s) {
    return std::find(v.begin(), v.end(), s[d].cache.state) != v.end();
  };
}

StatePredicate host_in(std::initializer_list<HS> states) {
  std::vector<HS> v(states);
  return [v](const SystemState& s) {
    return std::find(v.begin(), v.end(), s.host.state) != v.end();
  };
}

StatePredicate prog_head(DeviceId d, Instruction i) {
  return [d, i](const SystemState& s) {
    return !s[d].prog.empty() && s[d].prog.front() == i;
  };
}

StatePredicate htdreq_head(DeviceId d, HtdReqType t) {
  return [d, t](const SystemState& s) {
    return !s[d].htdreq.empty() && s[d].htdreq.front().type == t;
  };
}

StatePredicate htdrsp_head(DeviceId d, HtdRespType t) {
  return [d, t](const SystemState& s) {
    return !s[d].htdrsp.empty() && s[d].htdrsp.front().type == t;
  };
}

StatePredicate go_head(DeviceId d, DS target) {
  return [d, target](const SystemState& s) {
    return !s[d].htdrsp.empty() && s[d].htdrsp.front().type == HtdRespType::GO &&
           s[d].htdrsp.front().state == target;
  };
}

StatePredicate dthreq_head(DeviceId d, DthReqType t) {
  return [d, t](const SystemState& s) {
    return !s[d].dthreq.empty() && s[d].dthreq.front().type == t;
  };
}

StatePredicate dthrsp_head(DeviceId d, DthRespType t) {
  return [d, t](const SystemState& s) {
    return !s[d].dthrsp.empty() && s[d].dthrsp.front().type == t;
  };
}

StatePredicate htddata_pending(DeviceId d) {
  return [d](const SystemState& s) { return !s[d].htddata.empty(); };
}

StatePredicate dthdata_pending(DeviceId d) {
  return [d](const SystemState& s) { return !s[d].dthdata.empty(); };
}

StatePredicate channel_empty(DeviceId d, DevField f) {
  return [d, f](const SystemState& s) {
    const auto& side = s[d];
    switch (f) {
      case DevField::DthReq: return side.dthreq.empty();
      case DevField::DthRsp: return side.dthrsp.empty();
      case DevField::DthData: return side.dthdata.empty();
      case DevField::HtdReq: return side.htdreq.empty();
      case DevField::HtdRsp: return side.htdrsp.empty();
      case DevField::HtdData: return side.htddata.empty();
      default: return true;
    }
  };
}

StatePredicate go_data_match(DeviceId d) {
  return [d](const SystemState& s) {
    return !s[d].htdrsp.empty() && !s[d].htddata.empty() &&
           s[d].htdrsp.front().utid == s[d].htddata.front().utid;
  };
}

/**
 * Host-side view of whether device `o` holds, or has been granted, a copy the
 * host must account for. Reads device state and channel occupancy directly.
 */
bool holds_copy(const SystemState& s, DeviceId o) {
  const auto& side = s[o];
  switch (side.cache.state) {
    case DS::SH: case DS::EM:
    case DS::SMAD: case DS::SMD: case DS::SMA:
    case DS::ISD: case DS::ISA: case DS::IMD: case DS::IMA:
      return true;
    case DS::ISAD: case DS::IMAD:
      return !side.htdrsp.empty();
    case DS::SIA: case DS::SIAC: case DS::MIA:
      return !side.dthreq.empty();
    default:
      return false;
  }
}

// ---- restriction conjuncts -----------------------------------------------

void snoop_pushes_go(Builder& b, DeviceId d) {
  b.when("htdrsp{d} = []", channel_empty(d, DevField::HtdRsp),
         Restriction::SnoopPushesGo);
}

// The GO recipient has no unanswered snoop: nothing in its H2D request,
// D2H response or D2H data channels.
void go_cannot_tailgate(Builder& b, DeviceId d) {
  b.when("htdreq{d} = []", channel_empty(d, DevField::HtdReq),
         Restriction::GoCannotTailgate);
  b.when("dthrsp{d} = []", channel_empty(d, DevField::DthRsp),
         Restriction::GoCannotTailgate);
  b.when("dthdata{d} = []", channel_empty(d, DevField::DthData),
         Restriction::GoCannotTailgate);
}

void one_snoop(Builder& b, DeviceId d) {
  const DeviceId o = d.other();
  b.when("htdreq{o} = []", channel_empty(o, DevField::HtdReq),
         Restriction::OneSnoopPerAddr);
  b.when("dthrsp{o} = []", channel_empty(o, DevField::DthRsp),
         Restriction::OneSnoopPerAddr);
  b.when("dthdata{o} = []", channel_empty(o, DevField::DthData),
         Restriction::OneSnoopPerAddr);
}

// ---- effects ---------------------------------------------------------------

void set_state(Builder& b, DeviceId d, DS to) {
  b.then(device_field(DevField::Cache, d),
         "devcache{d}.state := " + std::string(to_string(to)),
         [d, to](const SystemState&, SystemState& post) {
           post[d].cache.state = to;
         });
}

// Takes the value at the head of htddata along with the new state.
void set_line_from_data(Builder& b, DeviceId d, DS to) {
  b.then(device_field(DevField::Cache, d),
         "devcache{d} := (val(head(htddata{d})), " + std::string(to_string(to)) +
             ")",
         [d, to](const SystemState& pre, SystemState& post) {
           post[d].cache.val = pre[d].htddata.front().val;
           post[d].cache.state = to;
         });
}

void pop_prog(Builder& b, DeviceId d) {
  b.then(device_field(DevField::Prog, d), "dprog{d} := tail(dprog{d})",
         [d](const SystemState& pre, SystemState& post) {
           post[d].prog.assign(pre[d].prog.begin() + 1, pre[d].prog.end());
         });
}

void bump_counter(Builder& b) {
  b.then(Field::counter, "counter := counter + 1",
         [](const SystemState& pre, SystemState& post) {
           post.counter = pre.counter + 1;
         });
}

void clear_buffer(Builder& b, DeviceId d) {
  b.then(device_field(DevField::Buffer, d), "dbuffer{d} := ⊥",
         [d](const SystemState&, SystemState& post) {
           post[d].buffer = std::monostate{};
         });
}

template <class Member>
void pop_front(Builder& b, DeviceId d, DevField f, const std::string& name,
               Member member) {
  b.then(device_field(f, d), name + " := tail(" + name + ")",
         [d, member](const SystemState& pre, SystemState& post) {
           const auto& ch = pre[d].*member;
           (post[d].*member).assign(ch.begin() + 1, ch.end());
         });
}

void pop_htdreq(Builder& b, DeviceId d) {
  pop_front(b, d, DevField::HtdReq, "htdreq{d}", &DeviceSide::htdreq);
}
void pop_htdrsp(Builder& b, DeviceId d) {
  pop_front(b, d, DevField::HtdRsp, "htdrsp{d}", &DeviceSide::htdrsp);
}
void pop_htddata(Builder& b, DeviceId d) {
  pop_front(b, d, DevField::HtdData, "htddata{d}", &DeviceSide::htddata);
}
void pop_dthreq(Builder& b, DeviceId d) {
  pop_front(b, d, DevField::DthReq, "dthreq{d}", &DeviceSide::dthreq);
}
void pop_dthrsp_of(Builder& b, DeviceId owner, DeviceId named_for) {
  const std::string name = owner == named_for ? "dthrsp{d}" : "dthrsp{o}";
  pop_front(b, owner, DevField::DthRsp, name, &DeviceSide::dthrsp);
}
void pop_dthdata_of(Builder& b, DeviceId owner, DeviceId named_for) {
  const std::string name = owner == named_for ? "dthdata{d}" : "dthdata{o}";
  pop_front(b, owner, DevField::DthData, name, &DeviceSide::dthdata);
}

// Snoop consumption: buffer the snoop and answer it.
void answer_snoop(Builder& b, DeviceId d, DthRespType rsp, bool with_data) {
  pop_htdreq(b, d);
  b.then(device_field(DevField::Buffer, d), "dbuffer{d} := head(htdreq{d})",
         [d](const SystemState& pre, SystemState& post) {
           post[d].buffer = pre[d].htdreq.front();
         });
  b.then(device_field(DevField::DthRsp, d),
         "dthrsp{d} := dthrsp{d} @ [(" + std::string(to_string(rsp)) + ", u)]",
         [d, rsp](const SystemState& pre, SystemState& post) {
           post[d].dthrsp.push_back({rsp, pre[d].htdreq.front().utid});
         });
  if (with_data) {
    b.then(device_field(DevField::DthData, d),
           "dthdata{d} := dthdata{d} @ [(u, devcache{d}.val)]",
           [d](const SystemState& pre, SystemState& post) {
             post[d].dthdata.push_back(
                 {pre[d].htdreq.front().utid, pre[d].cache.val});
           });
  }
}

// Host responses. The utid is read from the consumed message by `utid_of`.
using UtidOf = std::function<Utid(const SystemState&)>;

void send_resp(Builder& b, DeviceId to, HtdRespType type, DS target,
               UtidOf utid_of) {
  b.then(device_field(DevField::HtdRsp, to),
         "htdrsp{d} := htdrsp{d} @ [(" + std::string(to_string(type)) + ", " +
             std::string(to_string(target)) + ", u)]",
         [to, type, target, utid_of](const SystemState& pre, SystemState& post) {
           post[to].htdrsp.push_back({type, target, utid_of(pre)});
         });
}

void send_host_data(Builder& b, DeviceId to, UtidOf utid_of) {
  b.then(device_field(DevField::HtdData, to),
         "htddata{d} := htddata{d} @ [(u, hcache.val)]",
         [to, utid_of](const SystemState& pre, SystemState& post) {
           post[to].htddata.push_back({utid_of(pre), pre.host.val});
         });
}

void send_snoop(Builder& b, DeviceId d, HtdReqType type, UtidOf utid_of) {
  const DeviceId o = d.other();
  b.then(device_field(DevField::HtdReq, o),
         "htdreq{o} := htdreq{o} @ [(" + std::string(to_string(type)) + ", u)]",
         [o, type, utid_of](const SystemState& pre, SystemState& post) {
           post[o].htdreq.push_back({type, utid_of(pre)});
         });
}

void set_host_state(Builder& b, HS to) {
  b.then(Field::hcache, "hcache.state := " + std::string(to_string(to)),
         [to](const SystemState&, SystemState& post) { post.host.state = to; });
}

UtidOf req_utid(DeviceId d) {
  return [d](const SystemState& s) { return s[d].dthreq.front().utid; };
}
UtidOf rsp_utid(DeviceId from) {
  return [from](const SystemState& s) { return s[from].dthrsp.front().utid; };
}
UtidOf data_utid(DeviceId from) {
  return [from](const SystemState& s) { return s[from].dthdata.front().utid; };
}

using Def = std::function<Rule(DeviceId)>;

// ---- instruction issue and local hits -------------------------------------

Def issue(std::string name, DS from, Instruction instr, DthReqType req, DS to,
          bool post_counter_utid, bool published) {
  return [=](DeviceId d) {
    Builder b(name, d, RuleFamily::InstrIssue);
    b.when("devcache{d}.state = " + std::string(to_string(from)),
           dev_in(d, {from}));
    b.when("head(dprog{d}) = " + std::string(to_string(instr)),
           prog_head(d, instr));
    const std::string u = post_counter_utid ? "counter + 1" : "counter";
    b.then(device_field(DevField::DthReq, d),
           "dthreq{d} := dthreq{d} @ [(" + std::string(to_string(req)) + ", " +
               u + ")]",
           [d, req, post_counter_utid](const SystemState& pre,
                                       SystemState& post) {
             post[d].dthreq.push_back(
                 {req, pre.counter + (post_counter_utid ? 1u : 0u)});
           });
    set_state(b, d, to);
    bump_counter(b);
    if (published) b.published();
    return b.build();
  };
}

Def local_hit(std::string name, DS state, Instruction instr, bool store,
              bool published) {
  return [=](DeviceId d) {
    Builder b(name, d, RuleFamily::LocalHit);
    b.when("devcache{d}.state = " + std::string(to_string(state)),
           dev_in(d, {state}));
    b.when("head(dprog{d}) = " + std::string(to_string(instr)),
           prog_head(d, instr));
    if (store) {
      b.then(device_field(DevField::Cache, d),
             "devcache{d}.val := " + std::to_string(kStoreValue),
             [d](const SystemState&, SystemState& post) {
               post[d].cache.val = kStoreValue;
             });
    }
    pop_prog(b, d);
    clear_buffer(b, d);
    bump_counter(b);
    if (published) b.published();
    return b.build();
  };
}

// ---- device snoop handling --------------------------------------------------

Def snoop(std::string name, DS from, HtdReqType req, std::optional<DS> to,
          DthRespType rsp, bool with_data, bool published) {
  return [=](DeviceId d) {
    Builder b(name, d, RuleFamily::DeviceSnoop);
    b.when("devcache{d}.state = " + std::string(to_string(from)),
           dev_in(d, {from}));
    b.when("head(htdreq{d}) = (" + std::string(to_string(req)) + ", u)",
           htdreq_head(d, req));
    snoop_pushes_go(b, d);
    if (to) set_state(b, d, *to);
    answer_snoop(b, d, rsp, with_data);
    if (published) b.published();
    return b.build();
  };
}

// ---- device H2D response handling -------------------------------------------

Def take_go(std::string name, DS from, DS target, DS to) {
  return [=](DeviceId d) {
    Builder b(name, d, RuleFamily::DeviceH2DResp);
    b.when("devcache{d}.state = " + std::string(to_string(from)),
           dev_in(d, {from}));
    b.when("head(htdrsp{d}) = (GO, " + std::string(to_string(target)) + ", u)",
           go_head(d, target));
    set_state(b, d, to);
    pop_htdrsp(b, d);
    clear_buffer(b, d);
    return b.build();
  };
}

Def take_go_and_data(std::string name, DS from, DS target, bool published) {
  return [=](DeviceId d) {
    Builder b(name, d, RuleFamily::DeviceH2DResp);
    b.when("devcache{d}.state = " + std::string(to_string(from)),
           dev_in(d, {from}));
    b.when("head(htdrsp{d}) = (GO, " + std::string(to_string(target)) + ", u)",
           go_head(d, target));
    b.when("head(htddata{d}) = (u, v)", go_data_match(d));
    set_line_from_data(b, d, target);
    pop_htdrsp(b, d);
    pop_htddata(b, d);
    clear_buffer(b, d);
    if (published) b.published();
    return b.build();
  };
}

Def complete_evict(std::string name, DS from, HtdRespType resp, bool write_back,
                   bool published) {
  return [=](DeviceId d) {
    Builder b(name, d, RuleFamily::DeviceH2DResp);
    b.when("devcache{d}.state = " + std::string(to_string(from)),
           dev_in(d, {from}));
    b.when("head(htdrsp{d}) = (" + std::string(to_string(resp)) + ", _, u)",
           htdrsp_head(d, resp));
    set_state(b, d, DS::I);
    pop_htdrsp(b, d);
    pop_prog(b, d);
    if (write_back) {
      b.then(device_field(DevField::DthData, d),
             "dthdata{d} := dthdata{d} @ [(u, devcache{d}.val)]",
             [d](const SystemState& pre, SystemState& post) {
               post[d].dthdata.push_back(
                   {pre[d].htdrsp.front().utid, pre[d].cache.val});
             });
    }
    clear_buffer(b, d);
    if (published) b.published();
    return b.build();
  };
}

Def take_data(std::string name, DS from, DS to) {
  return [=](DeviceId d) {
    Builder b(name, d, RuleFamily::DeviceData);
    b.when("devcache{d}.state = " + std::string(to_string(from)),
           dev_in(d, {from}));
    b.when("htddata{d} ≠ []", htddata_pending(d));
    set_line_from_data(b, d, to);
    pop_htddata(b, d);
    return b.build();
  };
}

// ---- host request handling ---------------------------------------------------

// Grants `target` with GO + data straight away.
Def host_grant(std::string name, HS from, DthReqType req, DS target, HS to,
               std::optional<bool> other_holds, bool published) {
  return [=](DeviceId d) {
    Builder b(name, d, RuleFamily::HostD2HReq);
    b.when("hcache.state = " + std::string(to_string(from)), host_in({from}));
    b.when("head(dthreq{d}) = (" + std::string(to_string(req)) + ", u)",
           dthreq_head(d, req));
    if (other_holds) {
      const bool want = *other_holds;
      b.when(want ? "holds_copy(devcache{o})" : "¬holds_copy(devcache{o})",
             [d, want](const SystemState& s) {
               return holds_copy(s, d.other()) == want;
             });
      b.tracking();
    }
    go_cannot_tailgate(b, d);
    if (to != from) set_host_state(b, to);
    pop_dthreq(b, d);
    send_resp(b, d, HtdRespType::GO, target, req_utid(d));
    send_host_data(b, d, req_utid(d));
    if (published) b.published();
    return b.build();
  };
}

Def host_snoop_for(std::string name, HS from, DthReqType req, HtdReqType snp,
                   HS to, bool send_data, bool needs_tracking, bool published) {
  return [=](DeviceId d) {
    Builder b(name, d, RuleFamily::HostD2HReq);
    b.when("hcache.state = " + std::string(to_string(from)), host_in({from}));
    b.when("head(dthreq{d}) = (" + std::string(to_string(req)) + ", u)",
           dthreq_head(d, req));
    if (needs_tracking) {
      b.when("holds_copy(devcache{o})", [d](const SystemState& s) {
        return holds_copy(s, d.other());
      });
      b.tracking();
    }
    one_snoop(b, d);
    set_host_state(b, to);
    pop_dthreq(b, d);
    send_snoop(b, d, snp, req_utid(d));
    if (send_data) send_host_data(b, d, req_utid(d));
    if (published) b.published();
    return b.build();
  };
}

Def host_clean_evict(std::string name, DthReqType req, DS evicting,
                     bool other_holds, bool published) {
  return [=](DeviceId d) {
    Builder b(name, d, RuleFamily::HostD2HReq);
    b.when("hcache.state = SH", host_in({HS::SH}));
    b.when("devcache{d}.state = " + std::string(to_string(evicting)),
           dev_in(d, {evicting}));
    b.when("head(dthreq{d}) = (" + std::string(to_string(req)) + ", u)",
           dthreq_head(d, req));
    b.when(other_holds ? "holds_copy(devcache{o})" : "¬holds_copy(devcache{o})",
           [d, other_holds](const SystemState& s) {
             return holds_copy(s, d.other()) == other_holds;
           });
    b.tracking();
    go_cannot_tailgate(b, d);
    if (!other_holds) set_host_state(b, HS::I);
    pop_dthreq(b, d);
    send_resp(b, d, HtdRespType::GO_WritePullDrop, DS::I, req_utid(d));
    if (published) b.published();
    return b.build();
  };
}

// An evict from a line that a snoop already invalidated: nothing to pull.
Def host_stale_evict(std::string name, DthReqType req) {
  return [=](DeviceId d) {
    Builder b(name, d, RuleFamily::HostD2HReq);
    b.when("hcache.state ∈ {I, SH, EM}", host_in({HS::I, HS::SH, HS::EM}));
    b.when("devcache{d}.state = IIA", dev_in(d, {DS::IIA}));
    b.when("head(dthreq{d}) = (" + std::string(to_string(req)) + ", u)",
           dthreq_head(d, req));
    b.tracking();
    go_cannot_tailgate(b, d);
    pop_dthreq(b, d);
    send_resp(b, d, HtdRespType::GO_WritePullDrop, DS::I, req_utid(d));
    return b.build();
  };
}

Rule host_modified_dirty_evict(DeviceId d) {
  Builder b("HostModifiedDirtyEvict", d, RuleFamily::HostD2HReq);
  b.when("hcache.state = EM", host_in({HS::EM}));
  b.when("devcache{d}.state = MIA", dev_in(d, {DS::MIA}));
  b.when("head(dthreq{d}) = (DirtyEvict, u)",
         dthreq_head(d, DthReqType::DirtyEvict));
  b.when("htddata{d} = []", channel_empty(d, DevField::HtdData),
         Restriction::GoCannotTailgate);
  b.when("dthrsp{d} = []", channel_empty(d, DevField::DthRsp),
         Restriction::GoCannotTailgate);
  b.tracking();
  set_host_state(b, HS::ID);
  pop_dthreq(b, d);
  send_resp(b, d, HtdRespType::GO_WritePull, DS::I, req_utid(d));
  clear_buffer(b, d);
  b.published();
  return b.build();
}

// ---- host snoop-response and data handling -----------------------------------

// Response from the snooped device `o`; `d` is the requester.
Def host_response(std::string name, HS from, DthRespType rsp, HS to,
                  std::optional<DS> grant, bool published) {
  return [=](DeviceId d) {
    const DeviceId o = d.other();
    Builder b(name, d, RuleFamily::HostD2HResp);
    b.when("hcache.state = " + std::string(to_string(from)), host_in({from}));
    b.when("head(dthrsp{o}) = (" + std::string(to_string(rsp)) + ", u)",
           dthrsp_head(o, rsp));
    if (grant) go_cannot_tailgate(b, d);
    set_host_state(b, to);
    pop_dthrsp_of(b, o, d);
    if (grant) send_resp(b, d, HtdRespType::GO, *grant, rsp_utid(o));
    if (published) b.published();
    return b.build();
  };
}

// Data forwarded by the snooped device `o`, passed on to requester `d`.
Def host_forwarded_data(std::string name, HS from, HS to,
                        std::optional<DS> grant) {
  return [=](DeviceId d) {
    const DeviceId o = d.other();
    Builder b(name, d, RuleFamily::HostData);
    b.when("hcache.state = " + std::string(to_string(from)), host_in({from}));
    b.when("head(dthdata{o}) = (u, v)", dthdata_pending(o));
    if (grant) go_cannot_tailgate(b, d);
    b.then(Field::hcache,
           "hcache := (v, " + std::string(to_string(to)) + ")",
           [o, to](const SystemState& pre, SystemState& post) {
             post.host.val = pre[o].dthdata.front().val;
             post.host.state = to;
           });
    pop_dthdata_of(b, o, d);
    if (grant) send_resp(b, d, HtdRespType::GO, *grant, data_utid(o));
    b.then(device_field(DevField::HtdData, d),
           "htddata{d} := htddata{d} @ [(u, v)]",
           [o, d](const SystemState& pre, SystemState& post) {
             post[d].htddata.push_back(pre[o].dthdata.front());
           });
    return b.build();
  };
}

Rule id_data(DeviceId d) {
  Builder b("IDData", d, RuleFamily::HostData);
  b.when("hcache.state = ID", host_in({HS::ID}));
  b.when("head(dthdata{d}) = (u, v)", dthdata_pending(d));
  b.then(Field::hcache, "hcache := (v, I)",
         [d](const SystemState& pre, SystemState& post) {
           post.host.val = pre[d].dthdata.front().val;
           post.host.state = HS::I;
         });
  pop_dthdata_of(b, d, d);
  b.published();
  return b.build();
}

std::vector<Def> definitions() {
  using I = Instruction;
  using R = DthReqType;
  using P = DthRespType;
  using Q = HtdReqType;
  using G = HtdRespType;
  std::vector<Def> defs = {
      // Instruction issue. Evict requests carry the incremented counter.
      issue("InvalidLoad", DS::I, I::Load, R::RdShared, DS::ISAD, false, true),
      issue("InvalidStore", DS::I, I::Store, R::RdOwn, DS::IMAD, false, true),
      issue("SharedStore", DS::SH, I::Store, R::RdOwn, DS::SMAD, false, false),
      issue("SharedEvict", DS::SH, I::Evict, R::CleanEvict, DS::SIA, true, true),
      issue("SharedEvictNoData", DS::SH, I::Evict, R::CleanEvictNoData,
            DS::SIAC, true, false),
      issue("ModifiedEvict", DS::EM, I::Evict, R::DirtyEvict, DS::MIA, true,
            true),
      // Local hits.
      local_hit("SharedLoad", DS::SH, I::Load, false, false),
      local_hit("ModifiedLoad", DS::EM, I::Load, false, false),
      local_hit("ModifiedStore", DS::EM, I::Store, true, true),
      // Snoops.
      snoop("SharedSnpInv", DS::SH, Q::SnpInv, DS::I, P::RspIHitSE, false, true),
      snoop("ModifiedSnpInv", DS::EM, Q::SnpInv, DS::I, P::RspIFwdM, true,
            false),
      snoop("ModifiedSnpData", DS::EM, Q::SnpData, DS::SH, P::RspSFwdM, true,
            false),
      snoop("SMADSnpInv", DS::SMAD, Q::SnpInv, DS::IMAD, P::RspIHitSE, false,
            false),
      snoop("SIASnpInv", DS::SIA, Q::SnpInv, DS::IIA, P::RspIHitSE, false,
            false),
      snoop("SIACSnpInv", DS::SIAC, Q::SnpInv, DS::IIA, P::RspIHitSE, false,
            false),
      snoop("MIASnpInv", DS::MIA, Q::SnpInv, DS::IIA, P::RspIFwdM, true, false),
      snoop("MIASnpData", DS::MIA, Q::SnpData, DS::IIA, P::RspIFwdM, true,
            false),
      snoop("ISADSnpInv", DS::ISAD, Q::SnpInv, std::nullopt, P::RspIHitI,
            false, true),
      // GO and GO_WritePull(Drop) consumption.
      take_go("ISADGO", DS::ISAD, DS::SH, DS::ISD),
      take_go("ISAGO", DS::ISA, DS::SH, DS::SH),
      take_go_and_data("ISADGO+Data", DS::ISAD, DS::SH, true),
      take_go("IMADGO", DS::IMAD, DS::EM, DS::IMD),
      take_go("IMAGO", DS::IMA, DS::EM, DS::EM),
      take_go_and_data("IMADGO+Data", DS::IMAD, DS::EM, true),
      take_go("SMADGO", DS::SMAD, DS::EM, DS::SMD),
      take_go("SMAGO", DS::SMA, DS::EM, DS::EM),
      take_go_and_data("SMADGO+Data", DS::SMAD, DS::EM, false),
      complete_evict("SIA_GO_WritePullDrop", DS::SIA, G::GO_WritePullDrop,
                     false, true),
      complete_evict("SIAC_GO_WritePullDrop", DS::SIAC, G::GO_WritePullDrop,
                     false, false),
      complete_evict("MIA_GO_WritePull", DS::MIA, G::GO_WritePull, true, true),
      complete_evict("IIA_GO_WritePullDrop", DS::IIA, G::GO_WritePullDrop,
                     false, false),
      // Data consumption.
      take_data("ISADData", DS::ISAD, DS::ISA),
      take_data("ISDData", DS::ISD, DS::SH),
      take_data("IMADData", DS::IMAD, DS::IMA),
      take_data("IMDData", DS::IMD, DS::EM),
      take_data("SMADData", DS::SMAD, DS::SMA),
      take_data("SMDData", DS::SMD, DS::EM),
      // Host: D2H requests.
      host_grant("InvalidRdShared", HS::I, R::RdShared, DS::SH, HS::SH,
                 std::nullopt, true),
      host_grant("SharedRdShared", HS::SH, R::RdShared, DS::SH, HS::SH,
                 std::nullopt, false),
      host_snoop_for("ModifiedRdShared", HS::EM, R::RdShared, Q::SnpData,
                     HS::SAD, false, false, false),
      host_grant("InvalidRdOwn", HS::I, R::RdOwn, DS::EM, HS::EM, std::nullopt,
                 false),
      host_snoop_for("SharedRdOwn", HS::SH, R::RdOwn, Q::SnpInv, HS::MA, true,
                     true, true),
      host_grant("SharedRdOwnUnshared", HS::SH, R::RdOwn, DS::EM, HS::EM, false,
                 false),
      host_snoop_for("ModifiedRdOwn", HS::EM, R::RdOwn, Q::SnpInv, HS::MAD,
                     false, false, false),
      host_clean_evict("Shared_CleanEvict_NotLastDrop", R::CleanEvict, DS::SIA,
                       true, true),
      host_clean_evict("Shared_CleanEvict_LastDrop", R::CleanEvict, DS::SIA,
                       false, false),
      host_clean_evict("Shared_CleanEvictNoData_NotLastDrop",
                       R::CleanEvictNoData, DS::SIAC, true, false),
      host_clean_evict("Shared_CleanEvictNoData_LastDrop", R::CleanEvictNoData,
                       DS::SIAC, false, false),
      host_modified_dirty_evict,
      host_stale_evict("Stale_CleanEvict_Drop", R::CleanEvict),
      host_stale_evict("Stale_CleanEvictNoData_Drop", R::CleanEvictNoData),
      host_stale_evict("Stale_DirtyEvict_Drop", R::DirtyEvict),
      // Host: snoop responses.
      host_response("MARspIHitSE", HS::MA, P::RspIHitSE, HS::EM, DS::EM, false),
      host_response("MARspIHitI", HS::MA, P::RspIHitI, HS::EM, DS::EM, true),
      host_response("MARspIFwdM", HS::MA, P::RspIFwdM, HS::EM, DS::EM, false),
      host_response("MADRspIFwdM", HS::MAD, P::RspIFwdM, HS::MD, std::nullopt,
                    false),
      host_response("SADRspSFwdM", HS::SAD, P::RspSFwdM, HS::SD, std::nullopt,
                    false),
      host_response("SADRspIFwdM", HS::SAD, P::RspIFwdM, HS::SD, std::nullopt,
                    false),
      host_response("SARspSFwdM", HS::SA, P::RspSFwdM, HS::SH, DS::SH, false),
      host_response("SARspIFwdM", HS::SA, P::RspIFwdM, HS::SH, DS::SH, false),
      // Host: data.
      id_data,
      host_forwarded_data("MADData", HS::MAD, HS::MA, std::nullopt),
      host_forwarded_data("MDData", HS::MD, HS::EM, DS::EM),
      host_forwarded_data("SADData", HS::SAD, HS::SA, std::nullopt),
      host_forwarded_data("SDData", HS::SD, HS::SH, DS::SH),
  };
  return defs;
}

}  // namespace

std::string_view to_string(Restriction r) {
  switch (r) {
    case Restriction::SnoopPushesGo: return "snoop_pushes_go";
    case Restriction::GoCannotTailgate: return "go_cannot_tailgate";
    case Restriction::OneSnoopPerAddr: return "one_snoop_per_addr";
  }
  return "?";
}

Restriction parse_restriction(std::string_view s) {
  for (auto r : {Restriction::SnoopPushesGo, Restriction::GoCannotTailgate,
                 Restriction::OneSnoopPerAddr}) {
    if (to_string(r) == s) return r;
  }
  throw std::invalid_argument("unknown restriction '" + std::string(s) + "'");
}

bool RelaxConfig::enforces(Restriction r) const {
  switch (r) {
    case Restriction::SnoopPushesGo: return snoop_pushes_go;
    case Restriction::GoCannotTailgate: return go_cannot_tailgate;
    case Restriction::OneSnoopPerAddr: return one_snoop_per_addr;
  }
  return true;
}

void RelaxConfig::relax(Restriction r) {
  switch (r) {
    case Restriction::SnoopPushesGo: snoop_pushes_go = false; break;
    case Restriction::GoCannotTailgate: go_cannot_tailgate = false; break;
    case Restriction::OneSnoopPerAddr: one_snoop_per_addr = false; break;
  }
}

std::string_view to_string(RuleFamily f) {
  switch (f) {
    case RuleFamily::InstrIssue: return "InstrIssue";
    case RuleFamily::LocalHit: return "LocalHit";
    case RuleFamily::HostD2HReq: return "HostD2HReq";
    case RuleFamily::DeviceSnoop: return "DeviceSnoop";
    case RuleFamily::DeviceH2DResp: return "DeviceH2DResp";
    case RuleFamily::HostD2HResp: return "HostD2HResp";
    case RuleFamily::HostData: return "HostData";
    case RuleFamily::DeviceData: return "DeviceData";
  }
  return "?";
}

std::vector<Restriction> Rule::relaxable() const {
  std::set<Restriction> tags;
  for (const auto& g : guards)
    if (g.restriction) tags.insert(*g.restriction);
  for (const auto& g : relaxed_guards)
    if (g.restriction) tags.insert(*g.restriction);
  return {tags.begin(), tags.end()};
}

std::vector<Field> Rule::writes() const {
  std::set<Field> f;
  for (const auto& e : effects) f.insert(e.target);
  return {f.begin(), f.end()};
}

RuleCatalog::RuleCatalog(std::vector<Rule> rules, RelaxConfig config)
    : rules_(std::move(rules)), config_(config) {
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    rules_[i].id = i;
    if (!by_name_.emplace(rules_[i].name, i).second) {
      throw std::logic_error("duplicate rule name " + rules_[i].name);
    }
  }
}

const Rule* RuleCatalog::find(std::string_view name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : &rules_[it->second];
}

const Rule& RuleCatalog::get(std::string_view name) const {
  if (const Rule* r = find(name)) return *r;
  throw UnknownRule(std::string(name));
}

RuleCatalog build_catalog(const RelaxConfig& config) {
  std::vector<Rule> rules;
  for (const auto& def : definitions()) {
    for (DeviceId d : {DeviceId::One(), DeviceId::Two()}) {
      Rule r = def(d);
      std::vector<GuardConjunct> active;
      for (auto& g : r.guards) {
        if (g.restriction && !config.enforces(*g.restriction)) {
          r.relaxed_guards.push_back(std::move(g));
        } else {
          active.push_back(std::move(g));
        }
      }
      r.guards = std::move(active);
      rules.push_back(std::move(r));
    }
  }
  return RuleCatalog(std::move(rules), config);
}

const RuleCatalog& faithful_catalog() {
  static const RuleCatalog catalog = build_catalog(RelaxConfig::faithful());
  return catalog;
}

bool guard_holds(const Rule& r, const SystemState& s) {
  return std::all_of(r.guards.begin(), r.guards.end(),
                     [&s](const GuardConjunct& g) { return g.holds(s); });
}

SystemState apply_rule(const Rule& r, const SystemState& s) {
  if (!guard_holds(r, s)) throw RuleNotEnabled(r.name);
  SystemState post = s;
  for (const auto& e : r.effects) e.apply(s, post);
  return post;
}

std::vector<std::size_t> enabled_rules(const RuleCatalog& c,
                                       const SystemState& s) {
  std::vector<std::size_t> out;
  for (const auto& r : c.rules())
    if (guard_holds(r, s)) out.push_back(r.id);
  return out;
}

std::string base_name(const Rule& r) {
  return r.name.substr(0, r.name.size() - 1);
}

const std::vector<std::string>& published_rule_names() {
  static const std::vector<std::string> names = {
      "InvalidLoad1",       "ModifiedStore1",
      "SharedSnpInv1",      "HostModifiedDirtyEvict1",
      "ISADSnpInv2",        "SharedEvict1",
      "Shared_CleanEvict_NotLastDrop1", "SIA_GO_WritePullDrop1",
      "ModifiedEvict1",     "MIA_GO_WritePull1",
      "IDData1",            "InvalidStore1",
      "InvalidLoad2",       "InvalidRdShared2",
      "SharedRdOwn1",       "ISADGO+Data2",
      "MARspIHitI1",        "IMADGO+Data1"};
  return names;
}

std::string catalog_markdown(const RuleCatalog& c) {
  std::ostringstream os;
  std::size_t tracking = 0;
  for (const auto& r : c.rules()) tracking += r.tracking ? 1 : 0;
  os << "# Rule catalog\n\n";
  os << "Configuration: snoop_pushes_go=" << (c.config().snoop_pushes_go ? "enforced" : "relaxed")
     << ", go_cannot_tailgate=" << (c.config().go_cannot_tailgate ? "enforced" : "relaxed")
     << ", one_snoop_per_addr=" << (c.config().one_snoop_per_addr ? "enforced" : "relaxed")
     << "\n\n";
  os << "Rule instances: " << c.size() << " (" << c.size() / 2
     << " definitions, one instance per device)\n\n";
  os << "Tracking-dependent instances: " << tracking << "\n\n";
  for (const auto& r : c.rules()) {
    os << "## " << r.name << "\n\n";
    os << "- id: " << r.id << "\n";
    os << "- device: " << r.device.number() << "\n";
    os << "- family: " << to_string(r.family) << "\n";
    os << "- tracking-dependent: " << (r.tracking ? "yes" : "no") << "\n";
    if (!r.origin.empty()) os << "- origin: " << r.origin << "\n";
    auto tags = r.relaxable();
    os << "- relaxable guards:";
    if (tags.empty()) os << " none";
    for (std::size_t i = 0; i < tags.size(); ++i)
      os << (i ? ", " : " ") << to_string(tags[i]);
    os << "\n\nguards:\n\n";
    for (const auto& g : r.guards) {
      os << "- " << g.text;
      if (g.restriction) os << " [" << to_string(*g.restriction) << "]";
      os << "\n";
    }
    for (const auto& g : r.relaxed_guards) {
      os << "- ~~" << g.text << "~~ [" << to_string(*g.restriction)
         << ", relaxed]\n";
    }
    os << "\nactions:\n\n";
    for (const auto& e : r.effects) os << "- " << e.text << "\n";
    os << "\n";
  }
  return os.str();
}

}  // namespace cxlcache
