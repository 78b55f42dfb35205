#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "stairvpa/dvpa.hpp"
#include "stairvpa/stair_removal.hpp"

namespace stairvpa {

/// One move of the player producing L_su words.
enum class SuMove { call, ret };

/// Accepts `c`/`r` characters; whitespace is ignored.
std::vector<SuMove> parse_su_input(std::string_view text);

/// Memory of the strategy: η over {0,1} with the leftmost symbol on top.
/// A 0 stands for a copy of σ on the stack, a 1 for a copy of σ'.
struct ReducerState {
  std::string eta;
  std::size_t emitted = 0;
  std::size_t open_calls = 0;
  std::size_t zero_count = 0;
};

/// Strategy translating L_su moves into words for a stair-Büchi automaton
/// with a forbidden pattern.
class SuReducer {
 public:
  const PatternWitness& witness() const { return witness_; }
  /// Leads from the initial configuration to state q'.
  const Word& access() const { return access_; }
  /// Accepting steps on the run of u from (q, ⊥).
  std::size_t k() const { return k_; }

  Word on_call(ReducerState& state) const;
  /// Throws SemanticError when η holds no 0 (more returns than calls).
  Word on_return(ReducerState& state) const;

 private:
  friend SuReducer su_reducer(const Dvpa& dvpa, const PatternWitness& witness);
  PatternWitness witness_;
  Word access_;
  std::size_t k_ = 0;
};

/// Validates the witness by replay and finds an access word to q'.
SuReducer su_reducer(const Dvpa& dvpa, const PatternWitness& witness);

struct Transduction {
  Word access;
  std::vector<Word> moves;            // emission per input move
  Word output;                        // concatenated emissions, access excluded
  std::vector<ReducerState> trace;    // before the first move, then after each
  /// Accepting steps of the run from (q', ⊥) on the emissions so far, at
  /// every move boundary (same indexing as trace).
  std::vector<std::size_t> f_on_step;
};

Transduction transduce(const Dvpa& dvpa, const SuReducer& reducer, const std::vector<SuMove>& input);

}  // namespace stairvpa
