#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "stairvpa/dvpa.hpp"

namespace stairvpa {

/// A state together with a stack. `stack.back()` is the top symbol; the
/// bottom marker is implicit.
struct Configuration {
  StateId state = 0;
  std::vector<StackId> stack;

  std::size_t height() const { return stack.size(); }
  friend bool operator==(const Configuration&, const Configuration&) = default;
};

/// Finite run of a Dvpa on a word.
///
/// Stacks are stored as a parent-pointer tree so that long traces stay
/// linear in size; `config(i)` materializes one position.
class RunTrace {
 public:
  std::size_t length() const { return states_.size(); }
  const Word& consumed() const { return consumed_; }
  /// Index of the symbol that could not be read, if the run halted early.
  std::optional<std::size_t> death() const { return death_; }

  StateId state(std::size_t i) const { return states_.at(i); }
  std::size_t height(std::size_t i) const { return heights_.at(i); }
  Configuration config(std::size_t i) const;
  Configuration last() const { return config(length() - 1); }

  /// height(i) <= height(j) for every later position j of this trace.
  bool step(std::size_t i) const { return step_flags_.at(i); }
  const std::vector<bool>& step_flags() const { return step_flags_; }
  /// Steps whose state is accepting (F, or even priority).
  std::size_t f_on_step_count() const { return f_on_step_count_; }

 private:
  friend RunTrace run_word(const Dvpa& dvpa, const Configuration& start, const Word& word);

  Word consumed_;
  std::optional<std::size_t> death_;
  std::vector<StateId> states_;
  std::vector<std::size_t> heights_;
  std::vector<bool> step_flags_;
  std::size_t f_on_step_count_ = 0;
  // stack tree: node 0 is the bottom; node k > 0 holds (symbol, parent)
  std::vector<std::pair<StackId, std::size_t>> nodes_;
  std::vector<std::size_t> top_;
};

/// Deterministic simulation. A missing transition or a return on the empty
/// stack ends the trace and sets death().
RunTrace run_word(const Dvpa& dvpa, const Configuration& start, const Word& word);

inline RunTrace run_word(const Dvpa& dvpa, const Word& word) { return run_word(dvpa, Configuration{dvpa.initial(), {}}, word); }

/// Step flags of a height profile: position i is a step iff no later
/// position is lower.
std::vector<bool> step_flags(const std::vector<std::size_t>& heights);

namespace word_class {
struct WellMatched {};
struct MinimallyWellMatched {};
struct Pending {
  std::size_t open = 0;
};
/// `position` is the 0-based index of the first symbol that drives the
/// call/return surplus negative.
struct Illegal {
  std::size_t position = 0;
};
}  // namespace word_class

using WordClass =
    std::variant<word_class::WellMatched, word_class::MinimallyWellMatched, word_class::Pending, word_class::Illegal>;

/// Well-matched words include the empty word. Minimally well-matched words
/// have the form c w r with w well-matched.
WordClass classify_word(const Word& word);

/// Only the call/return classes matter, so the alphabet is not needed; this
/// overload only checks membership.
WordClass classify_word(const PartitionedAlphabet& alphabet, const Word& word);

bool is_well_matched(const Word& word);
bool is_minimally_well_matched(const Word& word);

}  // namespace stairvpa
