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

#ifndef CXLCACHE_TYPES_HH_
#define CXLCACHE_TYPES_HH_

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cxlcache {

/**
 * Cache line state of a device. Exclusive and Modified are collapsed into EM;
 * everything other than I, SH and EM is transient.
 */
enum class DeviceState : std::uint8_t {
  I, SH, EM,
  IMAD, IMA, IMD, SMAD, SMD, SMA, ISD, ISAD, ISA, MIA, SIA, IIA, SIAC, ISDI
};

enum class HostState : std::uint8_t {
  I, SH, EM,
  MAD, MA, MD, SAD, SD, SA, ID, IB, SB, MB
};

using Val = int;
using Utid = std::uint32_t;

enum class DthReqType : std::uint8_t {
  RdShared, RdOwn, CleanEvict, DirtyEvict, CleanEvictNoData
};
enum class DthRespType : std::uint8_t { RspIHitSE, RspIFwdM, RspSFwdM, RspIHitI };
enum class HtdReqType : std::uint8_t { SnpData, SnpInv };
enum class HtdRespType : std::uint8_t { GO, GO_WritePull, GO_WritePullDrop };
enum class Instruction : std::uint8_t { Load, Store, Evict };

struct DthReq {
  DthReqType type;
  Utid utid;
  bool operator==(const DthReq&) const = default;
};

struct DthResp {
  DthRespType type;
  Utid utid;
  bool operator==(const DthResp&) const = default;
};

struct HtdReq {
  HtdReqType type;
  Utid utid;
  bool operator==(const HtdReq&) const = default;
};

// The target state is always stable.
struct HtdResp {
  HtdRespType type;
  DeviceState state;
  Utid utid;
  bool operator==(const HtdResp&) const = default;
};

struct DataMsg {
  Utid utid;
  Val val;
  bool operator==(const DataMsg&) const = default;
};

// Empty (monostate) prints as ⊥.
using BufferEntry = std::variant<std::monostate, HtdResp, HtdReq>;

struct DeviceLine {
  Val val = 0;
  DeviceState state = DeviceState::I;
  bool operator==(const DeviceLine&) const = default;
};

struct HostLine {
  Val val = 0;
  HostState state = HostState::I;
  bool operator==(const HostLine&) const = default;
};

// Channels are FIFOs: consumed at the front, appended at the back. Their
// length is not bounded by the type; the singleton property is checked.
template <class Msg>
using Channel = std::vector<Msg>;

using Program = std::vector<Instruction>;

/// Identifies device 1 or device 2.
class DeviceId {
 public:
  constexpr explicit DeviceId(std::size_t index) : index_(index) {}
  static constexpr DeviceId One() { return DeviceId(0); }
  static constexpr DeviceId Two() { return DeviceId(1); }

  constexpr std::size_t index() const { return index_; }
  constexpr int number() const { return static_cast<int>(index_) + 1; }
  constexpr DeviceId other() const { return DeviceId(1 - index_); }
  constexpr bool operator==(const DeviceId&) const = default;

 private:
  std::size_t index_;
};

/// Everything on one device's side of the interconnect, including the
/// channels in both directions between it and the host.
struct DeviceSide {
  Program prog;
  DeviceLine cache;
  Channel<DthReq> dthreq;
  Channel<DthResp> dthrsp;
  Channel<DataMsg> dthdata;
  Channel<HtdReq> htdreq;
  Channel<HtdResp> htdrsp;
  Channel<DataMsg> htddata;
  BufferEntry buffer;
  bool operator==(const DeviceSide&) const = default;
};

struct SystemState {
  std::array<DeviceSide, 2> dev;
  HostLine host;
  Utid counter = 0;

  DeviceSide& operator[](DeviceId d) { return dev[d.index()]; }
  const DeviceSide& operator[](DeviceId d) const { return dev[d.index()]; }

  bool operator==(const SystemState&) const = default;
};

/// The twenty record fields, in display order.
enum class Field : std::uint8_t {
  dprog1, dprog2, devcache1, devcache2,
  dthreq1, dthreq2, dthrsp1, dthrsp2, dthdata1, dthdata2,
  htdreq1, htdreq2, htdrsp1, htdrsp2, htddata1, htddata2,
  dbuffer1, dbuffer2, hcache, counter
};
inline constexpr std::size_t kFieldCount = 20;

/// Per-device field kinds, resolved against a DeviceId.
enum class DevField : std::uint8_t {
  Prog, Cache, DthReq, DthRsp, DthData, HtdReq, HtdRsp, HtdData, Buffer
};

Field device_field(DevField f, DeviceId d);
std::string_view field_name(Field f);
std::optional<Field> parse_field(std::string_view name);
const std::array<Field, kFieldCount>& all_fields();

/// Renders one field in the tabular display syntax, e.g. "(0, SIA)" or
/// "[(CleanEvict, 1)]".
std::string render_field(const SystemState& s, Field f);
bool field_equal(const SystemState& a, const SystemState& b, Field f);

// Name conversions. Parsing throws std::invalid_argument on unknown names.
std::string_view to_string(DeviceState s);
std::string_view to_string(HostState s);
std::string_view to_string(DthReqType t);
std::string_view to_string(DthRespType t);
std::string_view to_string(HtdReqType t);
std::string_view to_string(HtdRespType t);
std::string_view to_string(Instruction i);
DeviceState parse_device_state(std::string_view s);
HostState parse_host_state(std::string_view s);
DthReqType parse_dthreq_type(std::string_view s);
DthRespType parse_dthresp_type(std::string_view s);
HtdReqType parse_htdreq_type(std::string_view s);
HtdRespType parse_htdresp_type(std::string_view s);
Instruction parse_instruction(std::string_view s);

std::string to_string(const DthReq& m);
std::string to_string(const DthResp& m);
std::string to_string(const HtdReq& m);
std::string to_string(const HtdResp& m);
std::string to_string(const DataMsg& m);
std::string to_string(const BufferEntry& b);
std::string to_string(const DeviceLine& l);
std::string to_string(const HostLine& l);
std::string to_string(const Program& p);

const std::vector<DeviceState>& all_device_states();
const std::vector<HostState>& all_host_states();

bool is_stable(DeviceState s);
bool is_stable(HostState s);

/// Finite value domain. Values outside it are rejected by parsers.
class ValueDomain {
 public:
  ValueDomain() : values_{-1, 0, 1, 42} {}
  explicit ValueDomain(std::vector<Val> values) : values_(std::move(values)) {}
  bool contains(Val v) const;
  const std::vector<Val>& values() const { return values_; }

 private:
  std::vector<Val> values_;
};

/// Value written by a Store hit.
inline constexpr Val kStoreValue = 42;

/// Builds an initial state: channels empty, buffers ⊥, counter 0. Throws
/// std::invalid_argument if any cache state is transient.
SystemState mk_initial_state(DeviceLine dev1, DeviceLine dev2, HostLine host,
                             Program prog1, Program prog2);

/// 64-bit hash over every field, counter included.
std::uint64_t state_fingerprint(const SystemState& s);

/// Swaps every device-1 field with its device-2 counterpart.
SystemState mirror(const SystemState& s);

/**
 * Compresses the set {UTIDs in flight or buffered} ∪ {counter} onto 0..k-1,
 * preserving order. Two states with equal canonical forms are bisimilar:
 * guards only compare UTIDs for equality, and fresh UTIDs are always the
 * counter or its successor, which are at least every live UTID.
 */
SystemState canonical_form(const SystemState& s);

/// All UTIDs carried by messages or buffers.
std::vector<Utid> live_utids(const SystemState& s);

struct StateHash {
  std::size_t operator()(const SystemState& s) const {
    return static_cast<std::size_t>(state_fingerprint(s));
  }
};

}  // namespace cxlcache

#endif  // CXLCACHE_TYPES_HH_
