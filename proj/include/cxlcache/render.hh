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

#ifndef CXLCACHE_RENDER_HH_
#define CXLCACHE_RENDER_HH_

#include <optional>
#include <string>
#include <vector>

#include "cxlcache/engine.hh"
#include "cxlcache/explorer.hh"
#include "cxlcache/invariants.hh"
#include "cxlcache/json.hh"

namespace cxlcache {

enum class OutputFormat { Json, Table, Msc, Markdown };

std::string_view to_string(OutputFormat f);
/// Throws std::invalid_argument.
OutputFormat parse_output_format(std::string_view s);

/// Fields whose value differs between any two consecutive states.
std::vector<Field> changed_fields(const Trace& t);

struct TableOptions {
  bool all_fields = false;
  std::vector<Field> columns;  // explicit selection; overrides the above
};

/// One row per state, labelled "(initial state)" or the fired rule. Only
/// fields that change somewhere in the trace are shown by default.
std::string render_table(const Trace& t, const TableOptions& opt = {});
std::string render_markdown(const Trace& t, const TableOptions& opt = {});

/// Message sequence chart with device1, host and device2 lifelines, one
/// line per message sent or consumed.
std::string render_msc(const Trace& t);

std::string render_trace(const Trace& t, OutputFormat f,
                         const TableOptions& opt = {});

Json report_to_json(const ExploreReport& r);
Json matrix_to_json(const MatrixReport& m);

}  // namespace cxlcache

#endif  // CXLCACHE_RENDER_HH_
