#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>

#include "stairvpa/dvpa.hpp"

namespace stairvpa {

/// The ultimately periodic word prefix · period^ω.
struct LassoWord {
  Word prefix;
  Word period;  // non-empty

  friend auto operator<=>(const LassoWord&, const LassoWord&) = default;
};

/// Parses `u ; v` (u may be empty, v may not).
LassoWord parse_lasso(const PartitionedAlphabet& alphabet, std::string_view text);
std::string format_lasso(const PartitionedAlphabet& alphabet, const LassoWord& lasso);

struct LassoProfile {
  long net = 0;               // calls minus returns in one period
  std::size_t max_dip = 0;    // largest drop from an earlier to a later point of one period
  /// Length of the shortest prefix of u·v·v with more returns than calls.
  std::optional<std::size_t> illegal_prefix;
};

LassoProfile profile(const PartitionedAlphabet& alphabet, const LassoWord& lasso);

enum class VerdictReason { cycle, dead_run };

struct LassoVerdict {
  bool accepted = false;
  VerdictReason reason = VerdictReason::cycle;
  std::optional<std::size_t> death_pos;
  /// Period indices b1 < b2 at which the boundary abstraction repeated.
  std::optional<std::pair<std::size_t, std::size_t>> boundary_pair;
  /// Priorities seen infinitely often (on steps, for stair kinds). Büchi
  /// kinds report 2 for F and 1 otherwise.
  std::set<unsigned> recurring_priorities;
};

/// Exact acceptance of prefix · period^ω under the automaton's own
/// acceptance kind.
LassoVerdict accepts(const Dvpa& dvpa, const LassoWord& lasso);

/// Diagnostic view of the periodic block found by accepts(): heights and
/// states of the positions [block_begin, block_end), and which of them are
/// steps infinitely often. Used by property tests.
struct LassoBlock {
  std::size_t block_begin = 0;
  std::size_t block_end = 0;
  std::vector<std::size_t> heights;
  std::vector<StateId> states;
  std::vector<bool> recurring_step;
  std::size_t min_height = 0;
  long shift = 0;  // height gained per block
};

/// Empty when the run dies.
std::optional<LassoBlock> lasso_block(const Dvpa& dvpa, const LassoWord& lasso);

std::string_view to_string(VerdictReason reason);

}  // namespace stairvpa
