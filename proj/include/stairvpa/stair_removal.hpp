#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stairvpa/dvpa.hpp"
#include "stairvpa/summaries.hpp"

namespace stairvpa {

/// Ordered pair of (non-final) states.
struct StatePair {
  StateId first = 0;
  StateId second = 0;
  friend auto operator<=>(const StatePair&, const StatePair&) = default;
};

/// The order on non-final state pairs: lower ≺ upper when the runs between
/// the components of `upper` can embed the pattern built from `lower`.
class PrecedesRelation {
 public:
  bool contains(StatePair lower, StatePair upper) const { return pairs_.count({lower, upper}) != 0; }
  const std::map<std::pair<StatePair, StatePair>, StateId>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }

  /// Auxiliary state (the shared return target) recorded for an entry.
  StateId auxiliary(StatePair lower, StatePair upper) const { return pairs_.at({lower, upper}); }

  std::vector<StatePair> reflexive() const;
  bool is_irreflexive() const { return reflexive().empty(); }
  bool is_transitive() const;

 private:
  friend PrecedesRelation precedes(const Dvpa& dvpa, const FlaggedRelation& wm, const CoupledRelation& cud,
                                   const Reachability& reach);
  std::map<std::pair<StatePair, StatePair>, StateId> pairs_;
};

/// Requires Büchi-kind acceptance (the final-state set is used).
PrecedesRelation precedes(const Dvpa& dvpa);
PrecedesRelation precedes(const Dvpa& dvpa, const FlaggedRelation& wm, const CoupledRelation& cud,
                          const Reachability& reach);

/// A forbidden pattern: q, q' non-final, q'' arbitrary, six words and two
/// stacks (bottom first). u·v·w·x·y·z must be minimally well-matched.
struct PatternWitness {
  StateId q = 0;
  StateId q1 = 0;  // q'
  StateId q2 = 0;  // q''
  Word u, v, w, x, y, z;
  std::vector<StackId> sigma;
  std::vector<StackId> sigma_prime;
};

/// Replays every arrow of a pattern with run_word. Returns the list of
/// violated conditions (empty when the witness is valid).
std::vector<std::string> replay_pattern(const Dvpa& dvpa, const PatternWitness& witness);

struct RemovalCheck {
  std::optional<PatternWitness> pattern;
  bool removable() const { return !pattern.has_value(); }
};

/// Detects forbidden patterns. The witness returned has passed
/// replay_pattern; a failing replay raises InternalError.
RemovalCheck check_removable(const Dvpa& dvpa);

/// Height of every non-final pair in the order.
struct HeightFunction {
  std::map<StatePair, unsigned> ht;
  unsigned h = 0;
  unsigned at(StateId q, StateId q2) const { return ht.at({q, q2}); }
};

/// Throws SemanticError when the order has a cycle.
HeightFunction heights(const Dvpa& dvpa, const PrecedesRelation& order);
HeightFunction heights(const Dvpa& dvpa);

/// State of the constructed parity automaton: an original state plus one
/// counter and one flag per height level.
struct ProductState {
  StateId state = 0;
  std::vector<std::uint32_t> counters;
  std::vector<std::uint8_t> flags;

  friend auto operator<=>(const ProductState&, const ProductState&) = default;
};

/// f(i) = 1 implies f(j) = 1 and counters(i) >= counters(j) for all j >= i.
bool flags_monotone(const ProductState& s);

struct ParityConstruction {
  Dvpa automaton;                    // parity kind
  std::vector<ProductState> states;  // indexed by the automaton's state ids
  std::vector<std::pair<StackId, StateId>> stack_symbols;  // (original symbol, saved product state)
  unsigned m = 0;
  HeightFunction height;
};

struct BuildOptions {
  std::size_t state_cap = 1'000'000;
};

/// Equivalent parity automaton for a stair-Büchi automaton without
/// forbidden patterns; only the reachable part is built. Throws
/// SemanticError on a pattern and ResourceLimitError past the cap.
ParityConstruction build_parity(const Dvpa& dvpa, const BuildOptions& options = {});

/// Build from an already computed height function; the caller vouches that
/// the automaton is free of forbidden patterns.
ParityConstruction build_parity(const Dvpa& dvpa, const HeightFunction& height, const BuildOptions& options = {});

}  // namespace stairvpa
