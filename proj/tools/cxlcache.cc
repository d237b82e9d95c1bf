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

// Command-line driver: explore, litmus, trace, catalog, matrix.
// Exit status: 0 success, 1 property violation or failed test, 2 usage error.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cxlcache/engine.hh"
#include "cxlcache/explorer.hh"
#include "cxlcache/invariants.hh"
#include "cxlcache/json.hh"
#include "cxlcache/litmus.hh"
#include "cxlcache/render.hh"
#include "cxlcache/rules.hh"

using namespace cxlcache;

namespace {

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_names(std::string text) {
  for (char& ch : text)
    if (ch == ',' || ch == '[' || ch == ']') ch = ' ';
  std::istringstream in(text);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

Program parse_prog(const std::string& text) {
  Program p;
  for (const auto& w : split_names(text)) {
    try {
      p.push_back(parse_instruction(w));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  return p;
}

template <class Line, class Parse>
Line parse_line(const std::string& text, Parse parse) {
  std::string joined;
  for (char ch : text)
    if (ch != '(' && ch != ')') joined += ch;
  const auto words = split_names(joined);
  if (words.size() != 2) throw UsageError("expected '(val, State)', got '" + text + "'");
  try {
    return Line{std::stoi(words[0]), parse(words[1])};
  } catch (const std::exception&) {
    throw UsageError("expected '(val, State)', got '" + text + "'");
  }
}

RelaxConfig relax_config(const std::vector<std::string>& flags) {
  RelaxConfig cfg;
  for (const auto& f : flags) {
    try {
      cfg.relax(parse_restriction(f));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  return cfg;
}

OutputFormat format_of(const std::string& s) {
  try {
    return parse_output_format(s);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

std::vector<PropertyDef> properties_of(const std::vector<std::string>& names) {
  try {
    return select_properties(names);
  } catch (const UnknownProperty& e) {
    throw UsageError(e.what());
  }
}

TableOptions table_options(bool all_fields, const std::string& columns) {
  TableOptions opt;
  opt.all_fields = all_fields;
  for (const auto& n : split_names(columns)) {
    auto f = parse_field(n);
    if (!f) throw UsageError("unknown field '" + n + "'");
    opt.columns.push_back(*f);
  }
  return opt;
}

// ---- explore ----------------------------------------------------------------

struct ExploreArgs {
  std::string prog1, prog2;
  std::string dev1 = "(0, I)", dev2 = "(0, I)", host = "(0, I)";
  std::string init;
  std::vector<std::string> relax, check;
  std::size_t max_states = 10'000'000;
  std::size_t max_depth = std::numeric_limits<std::size_t>::max();
  std::string format = "table";
  bool all_fields = false;
  bool exact = false;
  unsigned threads = 1;
};

int cmd_explore(const ExploreArgs& a) {
  SystemState init;
  if (!a.init.empty()) {
    try {
      init = state_from_json(Json::parse(read_file(a.init)));
    } catch (const std::exception& e) {
      throw UsageError(std::string("bad initial state: ") + e.what());
    }
  } else {
    try {
      init = mk_initial_state(
          parse_line<DeviceLine>(a.dev1, parse_device_state),
          parse_line<DeviceLine>(a.dev2, parse_device_state),
          parse_line<HostLine>(a.host, parse_host_state), parse_prog(a.prog1),
          parse_prog(a.prog2));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  const RuleCatalog cat = build_catalog(relax_config(a.relax));
  Limits lim;
  lim.max_states = std::max<std::size_t>(1, a.max_states);
  lim.max_depth = a.max_depth;
  lim.canonical_utids = !a.exact;
  lim.threads = a.threads;
  const auto props = properties_of(a.check);
  const OutputFormat fmt = format_of(a.format);
  ExploreReport rep;
  explore_graph(cat, init, lim, props, &rep);

  if (fmt == OutputFormat::Json) {
    std::cout << report_to_json(rep).dump(2) << "\n";
  } else {
    std::cout << "reachable states: " << rep.reachable_count << "\n"
              << "terminal states: " << rep.terminal_count << "\n"
              << "depth reached: " << rep.depth_reached << "\n"
              << "truncated: " << (rep.truncated ? "yes" : "no") << "\n";
    if (rep.unexpanded_count)
      std::cout << "unexpanded (channel overflow): " << rep.unexpanded_count << "\n";
    const TableOptions opt = table_options(a.all_fields, "");
    for (const auto& v : rep.verdicts) {
      if (v.holds()) {
        std::cout << v.property << ": holds\n";
      } else {
        std::cout << v.property << ": VIOLATED (witness of "
                  << v.witness->steps.size() << " steps)\n\n"
                  << render_trace(*v.witness, fmt, opt) << "\n";
      }
    }
  }
  return rep.all_hold() ? kOk : kFail;
}

// ---- litmus -----------------------------------------------------------------

void print_result(const LitmusResult& r, std::optional<OutputFormat> fmt,
                  const TableOptions& opt) {
  std::cout << (r.pass ? "PASS " : "FAIL ") << r.name;
  if (r.report)
    std::cout << " (" << r.report->reachable_count << " states explored)";
  std::cout << "\n";
  for (const auto& d : r.details) std::cout << "  " << d << "\n";
  if (!fmt) return;
  if (r.guided) {
    std::cout << "\nguided trace:\n" << render_trace(*r.guided, *fmt, opt) << "\n";
  }
  if (r.witness) {
    std::cout << "shortest violation:\n" << render_trace(*r.witness, *fmt, opt) << "\n";
  }
}

Json result_json(const LitmusResult& r) {
  Json j = {{"name", r.name}, {"pass", r.pass}, {"details", r.details}};
  if (r.guided) j["guided"] = trace_to_json(*r.guided);
  if (r.witness) j["witness"] = trace_to_json(*r.witness);
  if (r.report) j["report"] = report_to_json(*r.report);
  return j;
}

int cmd_litmus(const std::vector<std::string>& files, bool builtin,
               const std::string& format, bool all_fields, unsigned threads) {
  std::vector<LitmusTest> tests;
  if (builtin) tests = builtin_suite();
  for (const auto& f : files) {
    const std::string text = read_file(f);
    try {
      tests.push_back(parse_litmus(text));
    } catch (const ParseError& e) {
      throw UsageError(f + ": " + e.what());
    }
  }
  if (tests.empty()) throw UsageError("no litmus tests given (use FILE... or --builtin)");
  std::optional<OutputFormat> fmt;
  if (!format.empty()) fmt = format_of(format);
  const TableOptions opt = table_options(all_fields, "");
  Limits lim;
  lim.threads = threads;
  bool ok = true;
  Json all = Json::array();
  for (const auto& t : tests) {
    LitmusResult r;
    try {
      r = run_litmus(t, lim);
    } catch (const ScheduleStuck& e) {
      r.name = t.name;
      r.details.push_back(e.what());
      r.guided = std::nullopt;
    }
    ok = ok && r.pass;
    if (fmt == OutputFormat::Json) all.push_back(result_json(r));
    else print_result(r, fmt, opt);
  }
  if (fmt == OutputFormat::Json) std::cout << all.dump(2) << "\n";
  else std::cout << (ok ? "all tests passed" : "some tests FAILED") << "\n";
  return ok ? kOk : kFail;
}

// ---- trace ------------------------------------------------------------------

int cmd_trace(const std::string& file, const std::string& json_file,
              const std::string& format, bool all_fields,
              const std::string& columns) {
  const OutputFormat fmt = format_of(format);
  const TableOptions opt = table_options(all_fields, columns);
  Trace t;
  if (!json_file.empty()) {
    try {
      t = trace_from_json(Json::parse(read_file(json_file)));
    } catch (const std::exception& e) {
      throw UsageError(std::string("bad trace: ") + e.what());
    }
    if (auto err = validate_trace(faithful_catalog(), t)) {
      // A relaxed trace may still be valid under the fully relaxed catalog.
      RelaxConfig none{false, false, false};
      if (auto err2 = validate_trace(build_catalog(none), t)) {
        std::cerr << "invalid trace: " << *err << "\n";
        return kFail;
      }
    }
  } else {
    if (file.empty()) throw UsageError("trace needs a litmus FILE or --json");
    LitmusTest lt;
    try {
      lt = parse_litmus(read_file(file));
    } catch (const ParseError& e) {
      throw UsageError(file + ": " + e.what());
    }
    if (!lt.schedule) throw UsageError(file + ": no schedule to run");
    try {
      t = run_schedule(build_catalog(lt.relax), lt.initial(), *lt.schedule);
    } catch (const ScheduleStuck& e) {
      std::cerr << e.what() << "\nstate:\n" << state_to_json(e.state()).dump(2) << "\n";
      return kFail;
    }
  }
  std::cout << render_trace(t, fmt, opt);
  return kOk;
}

// ---- catalog ----------------------------------------------------------------

int cmd_catalog(const std::vector<std::string>& relax, const std::string& format) {
  const RuleCatalog cat = build_catalog(relax_config(relax));
  if (format == "json") {
    Json rules = Json::array();
    for (const auto& r : cat.rules()) {
      Json tags = Json::array();
      for (auto t : r.relaxable()) tags.push_back(std::string(to_string(t)));
      Json guards = Json::array();
      for (const auto& g : r.guards) guards.push_back(g.text);
      Json effects = Json::array();
      for (const auto& e : r.effects) effects.push_back(e.text);
      rules.push_back({{"id", r.id},
                       {"name", r.name},
                       {"device", r.device.number()},
                       {"family", std::string(to_string(r.family))},
                       {"tracking", r.tracking},
                       {"relaxable", tags},
                       {"guards", guards},
                       {"actions", effects}});
    }
    std::cout << Json{{"count", cat.size()}, {"rules", rules}}.dump(2) << "\n";
  } else if (format == "markdown" || format == "table") {
    std::cout << catalog_markdown(cat);
  } else {
    throw UsageError("catalog supports --format markdown or json");
  }
  return kOk;
}

// ---- matrix -----------------------------------------------------------------

int cmd_matrix(const std::vector<std::string>& relax,
               const std::vector<std::string>& check, const std::string& states,
               const std::vector<std::string>& files, const std::string& format,
               unsigned threads) {
  const RuleCatalog cat = build_catalog(relax_config(relax));
  const auto props = properties_of(check);
  std::vector<ReachableGraph> graphs;
  if (states == "builtin-reachable") {
    graphs = builtin_reachable(cat, threads);
  } else if (states != "none") {
    throw UsageError("--states must be builtin-reachable or none");
  }
  Limits lim;
  lim.threads = threads;
  for (const auto& f : files) {
    try {
      graphs.push_back(explore_graph(cat, parse_litmus(read_file(f)).initial(), lim, {}));
    } catch (const ParseError& e) {
      throw UsageError(f + ": " + e.what());
    }
  }
  std::vector<MatrixWitness> witnesses;
  const MatrixReport m = matrix_check_reachable(cat, props, graphs, &witnesses, threads);
  if (format == "json") {
    Json j = matrix_to_json(m);
    Json w = Json::array();
    for (const auto& x : witnesses)
      w.push_back({{"rule", m.rules[x.rule]},
                   {"property", m.properties[x.property]},
                   {"trace", trace_to_json(x.path)}});
    j["witnesses"] = w;
    std::cout << j.dump(2) << "\n";
  } else if (format == "markdown" || format == "table") {
    std::cout << matrix_markdown(m);
    for (const auto& x : witnesses) {
      std::cout << "\nFAIL " << m.rules[x.rule] << " x " << m.properties[x.property]
                << ", path:";
      for (const auto& n : x.path.rule_names()) std::cout << " " << n;
      std::cout << "\n";
    }
  } else {
    throw UsageError("matrix supports --format markdown or json");
  }
  return m.all_pass() ? kOk : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Executable model of a two-device CXL.cache system"};
  app.require_subcommand(1);

  ExploreArgs ex;
  auto* explore = app.add_subcommand("explore", "Exhaustive reachability with property checks");
  explore->add_option("--prog1", ex.prog1, "Device 1 program, e.g. 'Store,Load'");
  explore->add_option("--prog2", ex.prog2, "Device 2 program");
  explore->add_option("--dev1", ex.dev1, "Device 1 line '(val, State)'");
  explore->add_option("--dev2", ex.dev2, "Device 2 line '(val, State)'");
  explore->add_option("--host", ex.host, "Host line '(val, State)'");
  explore->add_option("--init", ex.init, "Initial state as a JSON file");
  explore->add_option("--relax", ex.relax, "Relax an ordering restriction");
  explore->add_option("--check", ex.check, "Property to check (default: all)");
  explore->add_option("--max-states", ex.max_states);
  explore->add_option("--max-depth", ex.max_depth);
  explore->add_option("--format", ex.format, "json, table, msc or markdown");
  explore->add_flag("--all-fields", ex.all_fields, "Show every field in tables");
  explore->add_flag("--exact", ex.exact, "Distinguish states by exact UTIDs and counter");
  explore->add_option("--threads", ex.threads);

  std::vector<std::string> lit_files;
  bool builtin = false, lit_all = false;
  std::string lit_format;
  unsigned lit_threads = 1;
  auto* litmus = app.add_subcommand("litmus", "Run litmus tests");
  litmus->add_option("files", lit_files, "Litmus files");
  litmus->add_flag("--builtin", builtin, "Run the built-in suite");
  litmus->add_option("--format", lit_format, "Render traces: json, table, msc or markdown");
  litmus->add_flag("--all-fields", lit_all);
  litmus->add_option("--threads", lit_threads);

  std::string tr_file, tr_json, tr_format = "table", tr_columns;
  bool tr_all = false;
  auto* trace = app.add_subcommand("trace", "Render the guided trace of a litmus file");
  trace->add_option("file", tr_file, "Litmus file with a schedule");
  trace->add_option("--json", tr_json, "Render a trace JSON file instead");
  trace->add_option("--format", tr_format, "json, table, msc or markdown");
  trace->add_flag("--all-fields", tr_all);
  trace->add_option("--columns", tr_columns, "Comma-separated fields to show");

  std::vector<std::string> cat_relax;
  std::string cat_format = "markdown";
  auto* catalog = app.add_subcommand("catalog", "Print the rule catalog");
  catalog->add_option("--relax", cat_relax);
  catalog->add_option("--format", cat_format, "markdown or json");

  std::vector<std::string> mx_relax, mx_check, mx_files;
  std::string mx_states = "builtin-reachable", mx_format = "markdown";
  unsigned mx_threads = 1;
  auto* matrix = app.add_subcommand("matrix", "Rule x property consecution check");
  matrix->add_option("--relax", mx_relax);
  matrix->add_option("--check", mx_check);
  matrix->add_option("--states", mx_states, "builtin-reachable or none");
  matrix->add_option("--litmus", mx_files, "Also use reachable states of these files");
  matrix->add_option("--format", mx_format, "markdown or json");
  matrix->add_option("--threads", mx_threads);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*explore) return cmd_explore(ex);
    if (*litmus) return cmd_litmus(lit_files, builtin, lit_format, lit_all, lit_threads);
    if (*trace) return cmd_trace(tr_file, tr_json, tr_format, tr_all, tr_columns);
    if (*catalog) return cmd_catalog(cat_relax, cat_format);
    if (*matrix)
      return cmd_matrix(mx_relax, mx_check, mx_states, mx_files, mx_format, mx_threads);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
