#pragma once

#include <string>

#include "stairvpa/dvpa.hpp"
#include "stairvpa/summaries.hpp"

namespace stairvpa {

/// Graphviz digraph of a step graph. Vertices are labelled `name:priority`.
std::string step_graph_dot(const Dvpa& dvpa, const StepGraph& graph);

}  // namespace stairvpa
