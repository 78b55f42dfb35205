#include "stairvpa/dot.hpp"

#include <sstream>

namespace stairvpa {

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + '"';
}

}  // namespace

std::string step_graph_dot(const Dvpa& dvpa, const StepGraph& graph) {
  std::ostringstream out;
  out << "digraph steps {\n";
  for (StateId q : graph.vertices) {
    const std::string& name = dvpa.state_name(q);
    out << "  " << quoted(name) << " [label=" << quoted(name + ":" + std::to_string(graph.vertex_priority.at(q)));
    if (q == dvpa.initial()) out << ", shape=doublecircle";
    out << "];\n";
  }
  for (const auto& [from, to] : graph.edges)
    out << "  " << quoted(dvpa.state_name(from)) << " -> " << quoted(dvpa.state_name(to)) << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace stairvpa
