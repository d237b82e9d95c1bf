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

#ifndef CXLCACHE_JSON_HH_
#define CXLCACHE_JSON_HH_

#include <string>

#include "cxlcache/engine.hh"
#include "cxlcache/types.hh"
#include "json.hpp"

namespace cxlcache {

using Json = nlohmann::json;

/// Object keyed by the lowercase field names. Buffers are null or a message
/// object; cache lines are {"val", "state"}.
Json state_to_json(const SystemState& s);

/// Throws std::invalid_argument on a missing field or a bad spelling.
SystemState state_from_json(const Json& j);

/// {"initial": state, "steps": [{"rule": name, "state": state}, ...]}
Json trace_to_json(const Trace& t);
Trace trace_from_json(const Json& j);

}  // namespace cxlcache

#endif  // CXLCACHE_JSON_HH_
