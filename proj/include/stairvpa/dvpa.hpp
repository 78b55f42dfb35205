#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace stairvpa {

using StateId = std::uint32_t;
using StackId = std::uint32_t;

enum class SymbolKind : std::uint8_t { call, ret, internal };

/// An input symbol: its class plus its index inside that class.
struct Symbol {
  SymbolKind kind = SymbolKind::internal;
  std::uint32_t index = 0;

  friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

using Word = std::vector<Symbol>;

/// Input alphabet split into calls, returns and internals.
class PartitionedAlphabet {
 public:
  PartitionedAlphabet() = default;

  /// Throws SemanticError on overlapping classes, duplicate or malformed
  /// names, or an empty union.
  PartitionedAlphabet(std::vector<std::string> calls, std::vector<std::string> returns,
                      std::vector<std::string> internals);

  const std::vector<std::string>& calls() const { return calls_; }
  const std::vector<std::string>& returns() const { return returns_; }
  const std::vector<std::string>& internals() const { return internals_; }

  std::size_t size() const { return calls_.size() + returns_.size() + internals_.size(); }
  std::size_t count(SymbolKind kind) const;

  std::optional<Symbol> find(std::string_view name) const;
  /// Like find() but throws SemanticError for unknown names.
  Symbol at(std::string_view name) const;
  const std::string& name(Symbol s) const;

  /// Every symbol, calls first, then returns, then internals.
  std::vector<Symbol> symbols() const;

  /// Same three classes with the same names (order-insensitive).
  bool same_symbols(const PartitionedAlphabet& other) const;

  /// Parses whitespace-separated symbol names.
  Word parse_word(std::string_view text) const;
  std::string format_word(const Word& w) const;

 private:
  std::vector<std::string> calls_;
  std::vector<std::string> returns_;
  std::vector<std::string> internals_;
  std::unordered_map<std::string, Symbol> lookup_;
};

/// True if `name` is usable as a state/symbol token in the text format.
bool is_valid_token(std::string_view name);

enum class AcceptanceKind : std::uint8_t { buchi, parity, stair_buchi, stair_parity };

std::string_view to_string(AcceptanceKind kind);
std::optional<AcceptanceKind> parse_acceptance_kind(std::string_view text);

/// Büchi kinds carry a final-state set, parity kinds a total priority map.
struct AcceptanceSpec {
  AcceptanceKind kind = AcceptanceKind::buchi;
  std::vector<bool> final_states;          // Büchi kinds, indexed by state
  std::vector<unsigned> priorities;        // parity kinds, indexed by state

  bool is_stair() const { return kind == AcceptanceKind::stair_buchi || kind == AcceptanceKind::stair_parity; }
  bool is_buchi() const { return kind == AcceptanceKind::buchi || kind == AcceptanceKind::stair_buchi; }

  /// Priority used for acceptance; Büchi kinds map F to 2 and the rest to 1.
  unsigned priority(StateId q) const;
  /// In F for Büchi kinds, even priority for parity kinds.
  bool accepting(StateId q) const;
};

struct CallTarget {
  StateId state = 0;
  StackId push = 0;

  friend bool operator==(const CallTarget&, const CallTarget&) = default;
};

class DvpaBuilder;

/// Deterministic visibly pushdown automaton with partial transition tables.
/// Calls and internals ignore the stack top; returns read and pop it. The
/// bottom marker is implicit (an empty stack).
class Dvpa {
 public:
  const PartitionedAlphabet& alphabet() const { return alphabet_; }
  std::size_t num_states() const { return state_names_.size(); }
  std::size_t num_stack_symbols() const { return stack_names_.size(); }
  StateId initial() const { return initial_; }
  const AcceptanceSpec& acceptance() const { return acceptance_; }

  const std::string& state_name(StateId q) const { return state_names_.at(q); }
  const std::string& stack_name(StackId z) const { return stack_names_.at(z); }
  const std::vector<std::string>& state_names() const { return state_names_; }
  const std::vector<std::string>& stack_names() const { return stack_names_; }
  std::optional<StateId> find_state(std::string_view name) const;
  std::optional<StackId> find_stack_symbol(std::string_view name) const;

  std::optional<CallTarget> call(StateId q, std::uint32_t call_index) const {
    const auto& t = call_[q * alphabet_.calls().size() + call_index];
    return t.state == kNone ? std::nullopt : std::optional<CallTarget>(t);
  }
  std::optional<StateId> internal(StateId q, std::uint32_t internal_index) const {
    StateId t = internal_[q * alphabet_.internals().size() + internal_index];
    return t == kNone ? std::nullopt : std::optional<StateId>(t);
  }
  std::optional<StateId> ret(StateId q, StackId z, std::uint32_t return_index) const {
    auto it = return_.find(return_key(q, z, return_index));
    return it == return_.end() ? std::nullopt : std::optional<StateId>(it->second);
  }

  std::size_t num_call_transitions() const;
  std::size_t num_internal_transitions() const;
  std::size_t num_return_transitions() const { return return_.size(); }

  /// Every defined return transition as (state, stack symbol, return index, target).
  struct ReturnEntry {
    StateId from;
    StackId pop;
    std::uint32_t symbol;
    StateId to;
  };
  std::vector<ReturnEntry> return_transitions() const;

  /// Same structure, replaced acceptance. Throws SemanticError when the
  /// condition does not fit the state set.
  Dvpa with_acceptance(AcceptanceSpec acceptance) const;

 private:
  friend class DvpaBuilder;
  static constexpr StateId kNone = static_cast<StateId>(-1);

  std::uint64_t return_key(StateId q, StackId z, std::uint32_t r) const {
    return (static_cast<std::uint64_t>(q) * (stack_names_.size() + 1) + z) * (alphabet_.returns().size() + 1) + r;
  }

  PartitionedAlphabet alphabet_;
  std::vector<std::string> state_names_;
  std::vector<std::string> stack_names_;
  std::unordered_map<std::string, StateId> state_lookup_;
  std::unordered_map<std::string, StackId> stack_lookup_;
  StateId initial_ = 0;
  AcceptanceSpec acceptance_;
  std::vector<CallTarget> call_;
  std::vector<StateId> internal_;
  std::unordered_map<std::uint64_t, StateId> return_;
};

/// Incremental construction of a Dvpa from ids. Used by the validator and
/// by constructions that synthesize automata.
class DvpaBuilder {
 public:
  explicit DvpaBuilder(PartitionedAlphabet alphabet);

  StateId add_state(std::string name);
  StackId add_stack_symbol(std::string name);
  std::size_t num_states() const { return states_.size(); }

  void set_initial(StateId q) { initial_ = q; }
  void set_call(StateId q, std::uint32_t c, StateId to, StackId push);
  void set_return(StateId q, StackId pop, std::uint32_t r, StateId to);
  void set_internal(StateId q, std::uint32_t i, StateId to);

  /// Throws SemanticError if the acceptance condition does not fit the states.
  Dvpa build(AcceptanceSpec acceptance) &&;

 private:
  PartitionedAlphabet alphabet_;
  std::vector<std::string> states_;
  std::vector<std::string> stack_;
  std::unordered_map<std::string, StateId> state_lookup_;
  std::unordered_map<std::string, StackId> stack_lookup_;
  std::optional<StateId> initial_;
  std::map<std::pair<StateId, std::uint32_t>, CallTarget> calls_;
  std::map<std::pair<StateId, std::uint32_t>, StateId> internals_;
  std::map<std::tuple<StateId, StackId, std::uint32_t>, StateId> returns_;
};

/// Name-level automaton as produced by the text parser. Line numbers are
/// kept so that semantic errors can point back into the file.
struct DvpaDescription {
  std::vector<std::string> calls;
  std::vector<std::string> returns;
  std::vector<std::string> internals;
  std::vector<std::string> stack;
  std::vector<std::string> states;
  std::string initial;
  AcceptanceKind kind = AcceptanceKind::buchi;
  std::vector<std::string> final_states;
  std::vector<std::pair<std::string, unsigned>> priorities;
  bool has_final = false;
  bool has_priorities = false;

  struct CallLine {
    std::string from, symbol, to, push;
    std::size_t line = 0;
  };
  struct ReturnLine {
    std::string from, pop, symbol, to;
    std::size_t line = 0;
  };
  struct InternalLine {
    std::string from, symbol, to;
    std::size_t line = 0;
  };
  std::vector<CallLine> call_lines;
  std::vector<ReturnLine> return_lines;
  std::vector<InternalLine> internal_lines;
};

struct Validated {
  Dvpa dvpa;
  std::vector<std::string> warnings;
};

/// Checks every static invariant and interns names. Missing transitions are
/// permitted and summarized as warnings.
Validated validate(const DvpaDescription& description);

}  // namespace stairvpa
