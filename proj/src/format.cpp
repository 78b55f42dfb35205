#include "stairvpa/format.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "stairvpa/errors.hpp"

namespace stairvpa {

namespace {

std::vector<std::string> tokenize(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

void expect_arrow(const std::vector<std::string>& t, std::size_t at, std::size_t line) {
  if (t[at] != "->") throw SyntaxError(line, "expected '->' in " + t[0] + " transition");
}

}  // namespace

DvpaDescription parse_description(std::string_view text) {
  DvpaDescription d;
  std::set<std::string> seen;
  bool header = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;

  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto t = tokenize(line);
    if (t.empty()) {
      if (end == text.size()) break;
      continue;
    }

    const std::string& key = t[0];
    if (!header) {
      if (key != "vpa") throw SyntaxError(line_no, "expected header 'vpa 1'");
      if (t.size() != 2 || t[1] != "1") throw SyntaxError(line_no, "unsupported format version");
      header = true;
      continue;
    }

    auto once = [&](const std::string& section) {
      if (!seen.insert(section).second) throw SyntaxError(line_no, "section '" + section + "' given twice");
    };
    auto rest = [&] { return std::vector<std::string>(t.begin() + 1, t.end()); };

    if (key == "calls") {
      once(key);
      d.calls = rest();
    } else if (key == "returns") {
      once(key);
      d.returns = rest();
    } else if (key == "internals") {
      once(key);
      d.internals = rest();
    } else if (key == "stack") {
      once(key);
      d.stack = rest();
    } else if (key == "states") {
      once(key);
      d.states = rest();
    } else if (key == "initial") {
      once(key);
      if (t.size() != 2) throw SyntaxError(line_no, "'initial' takes exactly one state");
      d.initial = t[1];
    } else if (key == "acceptance") {
      once(key);
      if (t.size() != 2) throw SyntaxError(line_no, "'acceptance' takes exactly one kind");
      auto kind = parse_acceptance_kind(t[1]);
      if (!kind) throw SyntaxError(line_no, "unknown acceptance kind '" + t[1] + "'");
      d.kind = *kind;
    } else if (key == "final") {
      once(key);
      d.final_states = rest();
      d.has_final = true;
    } else if (key == "priorities") {
      once(key);
      d.has_priorities = true;
      for (std::size_t i = 1; i < t.size(); ++i) {
        const auto colon = t[i].rfind(':');
        if (colon == std::string::npos || colon == 0 || colon + 1 == t[i].size())
          throw SyntaxError(line_no, "priority entry '" + t[i] + "' is not of the form q:n");
        unsigned value = 0;
        const char* first = t[i].data() + colon + 1;
        const char* last = t[i].data() + t[i].size();
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc() || ptr != last) throw SyntaxError(line_no, "bad priority in '" + t[i] + "'");
        d.priorities.emplace_back(t[i].substr(0, colon), value);
      }
    } else if (key == "call") {
      // call q a -> p Z
      if (t.size() != 6) throw SyntaxError(line_no, "call transition must read 'call q a -> p Z'");
      expect_arrow(t, 3, line_no);
      d.call_lines.push_back({t[1], t[2], t[4], t[5], line_no});
    } else if (key == "ret") {
      // ret q Z a -> p
      if (t.size() != 6) throw SyntaxError(line_no, "return transition must read 'ret q Z a -> p'");
      expect_arrow(t, 4, line_no);
      d.return_lines.push_back({t[1], t[2], t[3], t[5], line_no});
    } else if (key == "int") {
      // int q a -> p
      if (t.size() != 5) throw SyntaxError(line_no, "internal transition must read 'int q a -> p'");
      expect_arrow(t, 3, line_no);
      d.internal_lines.push_back({t[1], t[2], t[4], line_no});
    } else {
      throw SyntaxError(line_no, "unknown keyword '" + key + "'");
    }
    if (end == text.size()) break;
  }

  if (!header) throw SyntaxError(0, "missing header 'vpa 1'");
  for (const char* section : {"calls", "returns", "internals", "stack", "states", "initial", "acceptance"})
    if (!seen.count(section)) throw SyntaxError(0, std::string("missing section '") + section + "'");
  if (!d.has_final && !d.has_priorities) {
    const bool buchi = d.kind == AcceptanceKind::buchi || d.kind == AcceptanceKind::stair_buchi;
    throw SyntaxError(0, buchi ? "missing section 'final'" : "missing section 'priorities'");
  }
  return d;
}

Validated parse_automaton(std::string_view text) { return validate(parse_description(text)); }

Validated load_automaton(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SyntaxError(0, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_automaton(buf.str());
}

std::string serialize(const Dvpa& dvpa) {
  std::ostringstream out;
  auto list = [&](const char* key, const std::vector<std::string>& items) {
    out << key;
    for (const auto& s : items) out << ' ' << s;
    out << '\n';
  };
  const auto& a = dvpa.alphabet();
  out << "vpa 1\n";
  list("calls", a.calls());
  list("returns", a.returns());
  list("internals", a.internals());
  list("stack", dvpa.stack_names());
  list("states", dvpa.state_names());
  out << "initial " << dvpa.state_name(dvpa.initial()) << '\n';
  const AcceptanceSpec& acc = dvpa.acceptance();
  out << "acceptance " << to_string(acc.kind) << '\n';
  if (acc.is_buchi()) {
    out << "final";
    for (StateId q = 0; q < dvpa.num_states(); ++q)
      if (acc.final_states[q]) out << ' ' << dvpa.state_name(q);
  } else {
    out << "priorities";
    for (StateId q = 0; q < dvpa.num_states(); ++q) out << ' ' << dvpa.state_name(q) << ':' << acc.priorities[q];
  }
  out << '\n';

  for (StateId q = 0; q < dvpa.num_states(); ++q)
    for (std::uint32_t c = 0; c < a.calls().size(); ++c)
      if (auto t = dvpa.call(q, c))
        out << "call " << dvpa.state_name(q) << ' ' << a.calls()[c] << " -> " << dvpa.state_name(t->state) << ' '
            << dvpa.stack_name(t->push) << '\n';
  for (const auto& e : dvpa.return_transitions())
    out << "ret " << dvpa.state_name(e.from) << ' ' << dvpa.stack_name(e.pop) << ' ' << a.returns()[e.symbol] << " -> "
        << dvpa.state_name(e.to) << '\n';
  for (StateId q = 0; q < dvpa.num_states(); ++q)
    for (std::uint32_t i = 0; i < a.internals().size(); ++i)
      if (auto t = dvpa.internal(q, i))
        out << "int " << dvpa.state_name(q) << ' ' << a.internals()[i] << " -> " << dvpa.state_name(*t) << '\n';
  return out.str();
}

}  // namespace stairvpa
