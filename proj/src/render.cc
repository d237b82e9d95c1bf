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

#include "cxlcache/render.hh"

#include <algorithm>
#include <sstream>

namespace cxlcache {

std::string_view to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::Json: return "json";
    case OutputFormat::Table: return "table";
    case OutputFormat::Msc: return "msc";
    case OutputFormat::Markdown: return "markdown";
  }
  return "?";
}

OutputFormat parse_output_format(std::string_view s) {
  for (auto f : {OutputFormat::Json, OutputFormat::Table, OutputFormat::Msc,
                 OutputFormat::Markdown})
    if (to_string(f) == s) return f;
  throw std::invalid_argument("unknown format '" + std::string(s) + "'");
}

std::vector<Field> changed_fields(const Trace& t) {
  std::vector<Field> out;
  for (Field f : all_fields()) {
    const SystemState* prev = &t.initial;
    for (const auto& st : t.steps) {
      if (!field_equal(*prev, st.state, f)) {
        out.push_back(f);
        break;
      }
      prev = &st.state;
    }
  }
  return out;
}

namespace {

// Display width of UTF-8 text: counts code points.
std::size_t width(const std::string& s) {
  return static_cast<std::size_t>(std::count_if(
      s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

std::string pad(const std::string& s, std::size_t w) {
  return s + std::string(w > width(s) ? w - width(s) : 0, ' ');
}

std::vector<Field> columns_for(const Trace& t, const TableOptions& opt) {
  if (!opt.columns.empty()) return opt.columns;
  if (opt.all_fields) return {all_fields().begin(), all_fields().end()};
  return changed_fields(t);
}

std::vector<std::vector<std::string>> rows_for(const Trace& t,
                                               const std::vector<Field>& cols) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> head = {"transition rule"};
  for (Field f : cols) head.emplace_back(field_name(f));
  rows.push_back(std::move(head));
  auto row = [&](const std::string& label, const SystemState& s) {
    std::vector<std::string> r = {label};
    for (Field f : cols) r.push_back(render_field(s, f));
    rows.push_back(std::move(r));
  };
  if (t.steps.empty()) return rows;
  row("(initial state)", t.initial);
  for (const auto& st : t.steps) row(st.rule, st.state);
  return rows;
}

}  // namespace

std::string render_table(const Trace& t, const TableOptions& opt) {
  const auto rows = rows_for(t, columns_for(t, opt));
  std::vector<std::size_t> w(rows.front().size(), 0);
  for (const auto& r : rows)
    for (std::size_t i = 0; i < r.size(); ++i) w[i] = std::max(w[i], width(r[i]));
  std::ostringstream os;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    std::string line;
    for (std::size_t i = 0; i < rows[k].size(); ++i) {
      if (i) line += "  ";
      line += pad(rows[k][i], w[i]);
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    os << line << "\n";
    if (k == 0) {
      std::size_t total = 0;
      for (std::size_t i = 0; i < w.size(); ++i) total += w[i] + (i ? 2 : 0);
      os << std::string(total, '-') << "\n";
    }
  }
  return os.str();
}

std::string render_markdown(const Trace& t, const TableOptions& opt) {
  const auto rows = rows_for(t, columns_for(t, opt));
  std::ostringstream os;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    os << "|";
    for (const auto& c : rows[k]) os << " " << c << " |";
    os << "\n";
    if (k == 0) {
      os << "|";
      for (std::size_t i = 0; i < rows[k].size(); ++i) os << "---|";
      os << "\n";
    }
  }
  return os.str();
}

namespace {

constexpr std::size_t kDev1 = 10;
constexpr std::size_t kHost = 44;
constexpr std::size_t kDev2 = 78;
constexpr std::size_t kNote = 84;

std::size_t lifeline(int who) {  // 1, 0 (host), 2
  return who == 1 ? kDev1 : who == 2 ? kDev2 : kHost;
}

std::string blank() {
  std::string s(kDev2 + 1, ' ');
  s[kDev1] = s[kHost] = s[kDev2] = '|';
  return s;
}

std::string trim_right(std::string s) {
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

std::string arrow(int from, int to, const std::string& label) {
  std::string s = blank();
  const std::size_t a = std::min(lifeline(from), lifeline(to));
  const std::size_t b = std::max(lifeline(from), lifeline(to));
  for (std::size_t i = a + 1; i < b; ++i) s[i] = '-';
  if (lifeline(to) > lifeline(from)) s[b - 1] = '>';
  else s[a + 1] = '<';
  const std::string text = " " + label + " ";
  const std::size_t span = b - a - 3;
  if (text.size() <= span) s.replace(a + 2 + (span - text.size()) / 2, text.size(), text);
  return trim_right(s);
}

std::string note(int who, const std::string& text) {
  std::string s = blank();
  s[lifeline(who)] = '*';
  s.resize(kNote, ' ');
  return s + text;
}

struct Event {
  bool send;
  int from;
  int to;
  std::string msg;
  std::string extra;
};

template <class Msg>
void diff(const Channel<Msg>& pre, const Channel<Msg>& post, int from, int to,
          std::vector<Event>& out) {
  // A rule pops at most one message from, and appends at most one to, a
  // given channel, and never both.
  if (post.size() < pre.size()) out.push_back({false, from, to, to_string(pre.front()), ""});
  if (post.size() > pre.size()) out.push_back({true, from, to, to_string(post.back()), ""});
}

std::string who_name(int who) {
  return who == 0 ? "host" : "device" + std::to_string(who);
}

}  // namespace

std::string render_msc(const Trace& t) {
  std::ostringstream os;
  {
    std::string head(kDev2 + 8, ' ');
    head.replace(kDev1 - 3, 7, "device1");
    head.replace(kHost - 2, 4, "host");
    head.replace(kDev2 - 3, 7, "device2");
    os << trim_right(head) << "\n" << trim_right(blank()) << "\n";
  }
  const SystemState* pre = &t.initial;
  for (std::size_t k = 0; k < t.steps.size(); ++k) {
    const auto& st = t.steps[k];
    const SystemState& post = st.state;
    os << "  [" << k + 1 << "] " << st.rule << "\n";
    std::vector<Event> events;
    for (int d : {1, 2}) {
      const auto& a = pre->dev[d - 1];
      const auto& b = post.dev[d - 1];
      diff(a.dthreq, b.dthreq, d, 0, events);
      diff(a.dthrsp, b.dthrsp, d, 0, events);
      diff(a.dthdata, b.dthdata, d, 0, events);
      const std::size_t before = events.size();
      diff(a.htdreq, b.htdreq, 0, d, events);
      if (events.size() > before && !events.back().send && !a.htdrsp.empty())
        events.back().extra = ", ahead of pending " + to_string(a.htdrsp.front());
      diff(a.htdrsp, b.htdrsp, 0, d, events);
      diff(a.htddata, b.htddata, 0, d, events);
    }
    std::stable_partition(events.begin(), events.end(),
                          [](const Event& e) { return !e.send; });
    for (const auto& e : events) {
      if (e.send) os << arrow(e.from, e.to, e.msg) << "\n";
      else os << note(e.to, who_name(e.to) + " takes " + e.msg + e.extra) << "\n";
    }
    for (int d : {1, 2}) {
      const auto& a = pre->dev[d - 1].cache;
      const auto& b = post.dev[d - 1].cache;
      if (a != b) os << note(d, "devcache" + std::to_string(d) + " := " + to_string(b)) << "\n";
    }
    if (pre->host != post.host) os << note(0, "hcache := " + to_string(post.host)) << "\n";
    std::vector<std::string> broken;
    for (const auto& p : builtin_properties())
      if (p.holds(*pre) && !p.holds(post)) broken.push_back(p.name);
    for (const auto& b : broken) os << "  !! " << b << " violated here\n";
    pre = &post;
  }
  return os.str();
}

std::string render_trace(const Trace& t, OutputFormat f, const TableOptions& opt) {
  switch (f) {
    case OutputFormat::Json: return trace_to_json(t).dump(2) + "\n";
    case OutputFormat::Table: return render_table(t, opt);
    case OutputFormat::Msc: return render_msc(t);
    case OutputFormat::Markdown: return render_markdown(t, opt);
  }
  return {};
}

Json report_to_json(const ExploreReport& r) {
  Json verdicts = Json::object();
  for (const auto& v : r.verdicts) {
    Json e = {{"holds", v.holds()}};
    if (v.witness) e["witness"] = trace_to_json(*v.witness);
    verdicts[v.property] = e;
  }
  return Json{{"reachableCount", r.reachable_count},
              {"terminalCount", r.terminal_count},
              {"depthReached", r.depth_reached},
              {"unexpandedCount", r.unexpanded_count},
              {"truncated", r.truncated},
              {"verdicts", verdicts}};
}

Json matrix_to_json(const MatrixReport& m) {
  Json cells = Json::array();
  for (std::size_t r = 0; r < m.rules.size(); ++r) {
    for (std::size_t p = 0; p < m.properties.size(); ++p) {
      const auto& c = m.cell(r, p);
      Json e = {{"rule", m.rules[r]},
                {"property", m.properties[p]},
                {"pass", c.pass()},
                {"checked", c.checked}};
      if (c.failure) {
        e["witness"] = {{"pre", state_to_json(c.failure->pre)},
                        {"post", state_to_json(c.failure->post)}};
      }
      cells.push_back(std::move(e));
    }
  }
  return Json{{"statesChecked", m.states_checked},
              {"statesSkipped", m.states_skipped},
              {"rules", m.rules},
              {"properties", m.properties},
              {"cells", cells}};
}

}  // namespace cxlcache
