#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "stairvpa/dvpa.hpp"
#include "stairvpa/lasso.hpp"
#include "stairvpa/priority.hpp"
#include "stairvpa/summaries.hpp"

namespace testing {

using namespace stairvpa;

std::string fixture_path(const std::string& name);
Dvpa fixture(const std::string& name);
Dvpa parse(const std::string& text);

/// Fixtures with at most four states.
std::vector<std::string> small_fixtures();

/// Flags per state pair found by enumerating well-matched words up to
/// max_len: bit 1 = some run sees F on a base position, bit 2 = some run
/// does not.
std::map<std::pair<StateId, StateId>, std::uint8_t> brute_wm(const Dvpa& dvpa, std::size_t max_len);

struct BruteSteps {
  std::set<StateId> vertices;
  std::set<std::pair<StateId, StateId>> edges;
};
/// Successive step pairs on every trace of length <= max_len from the
/// initial configuration.
BruteSteps brute_steps(const Dvpa& dvpa, std::size_t max_len);

/// Core quadruples with flag bits, from ascents and descents of at most
/// max_len symbols each.
std::map<CoupledRelation::Quad, std::uint8_t> brute_core(const Dvpa& dvpa, std::size_t max_len);

struct RandomDvpaOptions {
  std::size_t states = 3;
  std::size_t calls = 1;
  std::size_t returns = 1;
  std::size_t internals = 1;
  std::size_t stack = 2;
  double density = 0.8;  // probability that a transition is defined
  AcceptanceKind kind = AcceptanceKind::stair_buchi;
  unsigned max_priority = 3;
};
Dvpa random_dvpa(std::mt19937_64& rng, const RandomDvpaOptions& options);

/// Priority graph with edge probability 0.35 and priorities <= max_priority.
PriorityGraph random_graph(std::mt19937_64& rng, std::size_t max_vertices, unsigned max_priority);

/// Whether some labeling with values in a range of `count` consecutive
/// naturals starting at 0 or 1 classifies all cycles like `graph.priority`.
bool labeling_exists(const PriorityGraph& graph, unsigned count);

/// Verdict by explicit unrolling: simulate u·v^periods and read recurring
/// steps off the last quarter, with future minima over the whole horizon.
/// Only valid for net(v) = 0 lassos.
std::set<std::size_t> brute_recurring_steps(const Dvpa& dvpa, const LassoWord& lasso, std::size_t horizon,
                                            std::size_t from, std::size_t to);

}  // namespace testing
