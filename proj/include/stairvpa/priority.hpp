#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "stairvpa/dvpa.hpp"
#include "stairvpa/summaries.hpp"

namespace stairvpa {

/// Finite graph with a priority per vertex. Vertices are 0..n-1.
struct PriorityGraph {
  std::size_t num_vertices = 0;
  std::set<std::pair<std::size_t, std::size_t>> edges;
  std::vector<unsigned> priority;
};

struct PriorityAssignment {
  std::vector<unsigned> relabel;
  unsigned count = 0;      // size of the contiguous range used
  unsigned base_parity = 0;  // parity of the smallest label used
};

/// Relabels with the fewest priorities such that every cycle keeps the
/// parity of its maximal priority.
PriorityAssignment min_priorities(const PriorityGraph& graph);

/// Maps the sorted used values onto a gap-free range starting at 0 or 1,
/// merging neighbours of equal parity.
std::vector<unsigned> compress_gaps(const std::vector<unsigned>& labels);

/// Exhaustive check that two labelings classify every cycle alike.
/// Limited to 12 vertices; throws std::invalid_argument beyond that.
bool classification_equivalent(const PriorityGraph& graph, const std::vector<unsigned>& pi,
                               const std::vector<unsigned>& pi2);

/// Vertex subsets (as bit masks) that are strongly connected and carry a
/// cycle. Exponential; used by the exhaustive checks.
std::vector<std::uint32_t> cyclic_subsets(const PriorityGraph& graph);

/// The step graph as a priority graph, with the vertex order of
/// `step.vertices`.
PriorityGraph to_priority_graph(const StepGraph& step);

struct StairIndexResult {
  unsigned count = 0;
  Dvpa relabeled;  // stair-parity
  StepGraph graph;
  PriorityAssignment assignment;
};

/// Minimal number of priorities for a stair acceptance condition, computed
/// on the step graph. Requires stair-parity or stair-Büchi acceptance.
StairIndexResult stair_index(const Dvpa& dvpa);

}  // namespace stairvpa
