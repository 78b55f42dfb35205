#include "stairvpa/priority.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <stdexcept>

#include "stairvpa/errors.hpp"

namespace stairvpa {

namespace {

using Adjacency = std::vector<std::vector<std::size_t>>;

Adjacency adjacency(const PriorityGraph& g) {
  Adjacency adj(g.num_vertices);
  for (const auto& [a, b] : g.edges) adj.at(a).push_back(b);
  return adj;
}

/// Tarjan's SCCs of the subgraph induced by `members`.
std::vector<std::vector<std::size_t>> sccs(const Adjacency& adj, const std::vector<bool>& members) {
  const std::size_t n = adj.size();
  std::vector<long> index(n, -1);
  std::vector<long> low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> out;
  long counter = 0;

  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::size_t w : adj[v]) {
      if (!members[w]) continue;
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::size_t> comp;
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp.push_back(w);
      } while (w != v);
      out.push_back(std::move(comp));
    }
  };
  for (std::size_t v = 0; v < n; ++v)
    if (members[v] && index[v] < 0) visit(v);
  return out;
}

bool has_self_loop(const Adjacency& adj, std::size_t v) {
  return std::find(adj[v].begin(), adj[v].end(), v) != adj[v].end();
}

bool cyclic(const Adjacency& adj, const std::vector<std::size_t>& comp) {
  return comp.size() > 1 || has_self_loop(adj, comp.front());
}

/// Labels every vertex of `members` that lies on a cycle inside `members`
/// with the least values >= floor; returns the largest label assigned.
std::optional<unsigned> label_cycles(const Adjacency& adj, const std::vector<unsigned>& prio,
                                     const std::vector<bool>& members, unsigned floor,
                                     std::vector<std::optional<unsigned>>& label) {
  std::optional<unsigned> overall;
  for (const auto& comp : sccs(adj, members)) {
    if (!cyclic(adj, comp)) continue;
    unsigned top_prio = 0;
    for (std::size_t v : comp) top_prio = std::max(top_prio, prio[v]);
    const unsigned parity = top_prio % 2;

    std::vector<bool> rest(adj.size(), false);
    for (std::size_t v : comp)
      if (prio[v] != top_prio) rest[v] = true;
    const std::optional<unsigned> inner = label_cycles(adj, prio, rest, floor, label);

    unsigned top = parity < floor ? parity + 2 : parity;
    if (inner) top = (*inner % 2 == parity) ? *inner : *inner + 1;
    for (std::size_t v : comp)
      if (!label[v]) label[v] = top;
    overall = std::max(overall.value_or(0), top);
  }
  return overall;
}

}  // namespace

std::vector<unsigned> compress_gaps(const std::vector<unsigned>& labels) {
  std::vector<unsigned> used(labels);
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  std::map<unsigned, unsigned> remap;
  unsigned cur = 0;
  for (std::size_t j = 0; j < used.size(); ++j) {
    if (j == 0)
      cur = used[0] % 2;
    else if (used[j] % 2 != used[j - 1] % 2)
      ++cur;
    remap[used[j]] = cur;
  }
  std::vector<unsigned> out;
  out.reserve(labels.size());
  for (unsigned l : labels) out.push_back(remap.at(l));
  return out;
}

namespace {

PriorityAssignment labeling_from(const Adjacency& adj, const std::vector<unsigned>& prio, unsigned floor) {
  const std::size_t n = adj.size();
  std::vector<std::optional<unsigned>> label(n);
  label_cycles(adj, prio, std::vector<bool>(n, true), floor, label);

  std::optional<unsigned> lowest;
  for (const auto& l : label)
    if (l) lowest = std::min(lowest.value_or(*l), *l);
  std::vector<unsigned> raw(n);
  for (std::size_t v = 0; v < n; ++v) raw[v] = label[v].value_or(lowest.value_or(0));

  PriorityAssignment out;
  out.relabel = compress_gaps(raw);
  if (n > 0) {
    auto [lo, hi] = std::minmax_element(out.relabel.begin(), out.relabel.end());
    out.count = *hi - *lo + 1;
    out.base_parity = *lo % 2;
  }
  return out;
}

}  // namespace

// SCCs are labeled independently, so an SCC whose least labels start even
// can widen the range for one that starts odd. Labeling once from 0 and
// once with every label >= 1 and keeping the narrower result aligns them.
PriorityAssignment min_priorities(const PriorityGraph& graph) {
  if (graph.priority.size() != graph.num_vertices) throw std::invalid_argument("priority map is not total");
  const Adjacency adj = adjacency(graph);
  PriorityAssignment from_zero = labeling_from(adj, graph.priority, 0);
  PriorityAssignment from_one = labeling_from(adj, graph.priority, 1);
  return from_one.count < from_zero.count ? from_one : from_zero;
}

std::vector<std::uint32_t> cyclic_subsets(const PriorityGraph& graph) {
  const std::size_t n = graph.num_vertices;
  if (n > 20) throw std::invalid_argument("cyclic_subsets: graph too large");
  std::vector<std::uint32_t> succ(n, 0);
  std::vector<std::uint32_t> pred(n, 0);
  for (const auto& [a, b] : graph.edges) {
    succ[a] |= 1U << b;
    pred[b] |= 1U << a;
  }
  auto closure = [&](std::uint32_t mask, std::size_t start, const std::vector<std::uint32_t>& next) {
    std::uint32_t seen = 1U << start;
    std::uint32_t frontier = seen;
    while (frontier) {
      std::uint32_t grow = 0;
      for (std::size_t v = 0; v < n; ++v)
        if (frontier & (1U << v)) grow |= next[v] & mask;
      frontier = grow & ~seen;
      seen |= grow;
    }
    return seen;
  };
  std::vector<std::uint32_t> out;
  for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
    const std::size_t start = static_cast<std::size_t>(__builtin_ctz(mask));
    if ((mask & (mask - 1)) == 0) {
      if (succ[start] & mask) out.push_back(mask);
      continue;
    }
    if (closure(mask, start, succ) == mask && closure(mask, start, pred) == mask) out.push_back(mask);
  }
  return out;
}

bool classification_equivalent(const PriorityGraph& graph, const std::vector<unsigned>& pi,
                               const std::vector<unsigned>& pi2) {
  if (graph.num_vertices > 12) throw std::invalid_argument("classification_equivalent: more than 12 vertices");
  for (std::uint32_t mask : cyclic_subsets(graph)) {
    unsigned m1 = 0;
    unsigned m2 = 0;
    for (std::size_t v = 0; v < graph.num_vertices; ++v) {
      if (!(mask & (1U << v))) continue;
      m1 = std::max(m1, pi.at(v));
      m2 = std::max(m2, pi2.at(v));
    }
    if (m1 % 2 != m2 % 2) return false;
  }
  return true;
}

PriorityGraph to_priority_graph(const StepGraph& step) {
  PriorityGraph g;
  g.num_vertices = step.vertices.size();
  std::map<StateId, std::size_t> pos;
  for (std::size_t i = 0; i < step.vertices.size(); ++i) {
    pos[step.vertices[i]] = i;
    g.priority.push_back(step.vertex_priority.at(step.vertices[i]));
  }
  for (const auto& [a, b] : step.edges) g.edges.insert({pos.at(a), pos.at(b)});
  return g;
}

StairIndexResult stair_index(const Dvpa& dvpa) {
  if (!dvpa.acceptance().is_stair()) throw SemanticError("stair index needs a stair-buchi or stair-parity automaton");
  StairIndexResult out;
  out.graph = step_graph(dvpa);
  const PriorityGraph pg = to_priority_graph(out.graph);
  out.assignment = min_priorities(pg);

  const Adjacency adj = adjacency(pg);
  bool any_cycle = false;
  for (const auto& comp : sccs(adj, std::vector<bool>(pg.num_vertices, true))) any_cycle = any_cycle || cyclic(adj, comp);
  if (!any_cycle) {
    // Without cycles no run has infinitely many steps; one odd label rejects everything.
    out.assignment.relabel.assign(pg.num_vertices, 1);
    out.assignment.count = 1;
    out.assignment.base_parity = 1;
  }
  out.count = std::max(1U, out.assignment.count);

  const unsigned fill = out.assignment.relabel.empty()
                            ? 1U
                            : *std::min_element(out.assignment.relabel.begin(), out.assignment.relabel.end());
  AcceptanceSpec acc;
  acc.kind = AcceptanceKind::stair_parity;
  acc.priorities.assign(dvpa.num_states(), fill);
  for (std::size_t i = 0; i < out.graph.vertices.size(); ++i)
    acc.priorities[out.graph.vertices[i]] = out.assignment.relabel[i];
  out.relabeled = dvpa.with_acceptance(std::move(acc));
  return out;
}

}  // namespace stairvpa
