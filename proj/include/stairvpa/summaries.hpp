#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <utility>
#include <vector>

#include "stairvpa/dvpa.hpp"

namespace stairvpa {

/// Whether the step positions of a run segment carry an accepting state.
enum class StepFlag : std::uint8_t { sees = 1, avoid = 2 };

inline std::uint8_t bit(StepFlag f) { return static_cast<std::uint8_t>(f); }

/// sees absorbs: a concatenation sees F iff one of its parts does.
inline StepFlag join(StepFlag a, StepFlag b) {
  return (a == StepFlag::sees || b == StepFlag::sees) ? StepFlag::sees : StepFlag::avoid;
}

/// Well-matched reachability between states, with step flags.
///
/// Entry (q, q') means some well-matched word (possibly empty) leads from
/// (q, ⊥) to (q', ⊥). `sees` means some such run has an accepting state on
/// a base-height position (both endpoints included); `avoid` means some
/// such run has none. Both may hold.
class FlaggedRelation {
 public:
  FlaggedRelation() = default;
  explicit FlaggedRelation(std::size_t n) : n_(n), bits_(n * n, 0) {}

  std::size_t num_states() const { return n_; }
  bool reach(StateId q, StateId q2) const { return bits_[q * n_ + q2] != 0; }
  bool has(StateId q, StateId q2, StepFlag f) const { return (bits_[q * n_ + q2] & bit(f)) != 0; }
  bool sees(StateId q, StateId q2) const { return has(q, q2, StepFlag::sees); }
  bool avoid(StateId q, StateId q2) const { return has(q, q2, StepFlag::avoid); }
  std::uint8_t flags(StateId q, StateId q2) const { return bits_[q * n_ + q2]; }

  /// A well-matched word realizing the entry; empty optional if absent.
  std::optional<Word> witness(StateId q, StateId q2, StepFlag f) const;
  /// Any flag.
  std::optional<Word> witness(StateId q, StateId q2) const;

  struct Derivation {
    enum class Rule : std::uint8_t { base, internal, surround } rule = Rule::base;
    StateId mid = 0;          // (q, mid) premise
    StepFlag mid_flag = StepFlag::avoid;
    Symbol first;             // internal symbol, or the call
    Symbol last;              // the return (surround)
    StateId inner_from = 0;   // surround: inner well-matched pair
    StateId inner_to = 0;
    StepFlag inner_flag = StepFlag::avoid;
  };

 private:
  friend FlaggedRelation wm_summaries(const Dvpa& dvpa);

  std::size_t key(StateId q, StateId q2, StepFlag f) const { return (q * n_ + q2) * 2 + (f == StepFlag::sees ? 0 : 1); }

  std::size_t n_ = 0;
  std::vector<std::uint8_t> bits_;
  std::vector<Derivation> derivations_;  // indexed by key()
};

/// Least fixpoint over internal moves and c·w·r wrapping.
FlaggedRelation wm_summaries(const Dvpa& dvpa);

/// Reachable states from the initial configuration, with the stack tops
/// (nullopt for the empty stack) each state can be seen with.
struct Reachability {
  std::vector<bool> states;
  std::set<std::pair<StateId, std::optional<StackId>>> surfaces;
  /// A word from the initial configuration to some configuration whose
  /// state is q (the stack is left as the word leaves it).
  std::optional<Word> access_word(StateId q) const;

  struct Parent {
    StateId state;
    std::optional<StackId> surface;
    Word segment;
  };
  std::map<std::pair<StateId, std::optional<StackId>>, std::optional<Parent>> parents;
};

Reachability reachable(const Dvpa& dvpa);
Reachability reachable(const Dvpa& dvpa, const FlaggedRelation& wm);

/// Graph on states connecting states that occur on successive steps.
/// Successive steps are joined by an internal symbol, a call that stays
/// pending, or a minimally well-matched word.
struct StepGraph {
  std::vector<StateId> vertices;               // sorted
  std::set<std::pair<StateId, StateId>> edges;
  std::map<StateId, unsigned> vertex_priority;

  bool has_vertex(StateId q) const { return vertex_priority.count(q) != 0; }
};

/// With `pending_calls` false the call edges are left out, which gives the
/// graph built from internal symbols and minimally well-matched words only.
StepGraph step_graph(const Dvpa& dvpa, bool pending_calls = true);
StepGraph step_graph(const Dvpa& dvpa, const FlaggedRelation& wm, bool pending_calls = true);

/// Stack-coupled ascent/descent pairs.
///
/// core(q, p, d, d') with flag φ: for some non-empty stack σ, an ascent
/// from (q, ⊥) to (p, σ) starting with the call that pushes the bottom
/// symbol of σ, with φ describing accepting states on its steps, and a
/// descent from (d, σ) to (d', ⊥) ending with the return that pops it.
/// full() additionally allows a leading well-matched segment on the ascent
/// (its flag joins φ) and a trailing one on the descent.
class CoupledRelation {
 public:
  struct Quad {
    StateId q, p, d, d2;
    friend auto operator<=>(const Quad&, const Quad&) = default;
  };

  struct Witness {
    Word ascent;
    Word descent;
    std::vector<StackId> stack;  // bottom first; back() is the top
  };

  std::size_t num_states() const { return n_; }
  bool core(const Quad& t, StepFlag f) const { return (core_[index(t)] & bit(f)) != 0; }
  bool full(const Quad& t, StepFlag f) const { return (full_[index(t)] & bit(f)) != 0; }
  bool core_any(const Quad& t) const { return core_[index(t)] != 0; }
  bool full_any(const Quad& t) const { return full_[index(t)] != 0; }

  std::vector<Quad> core_entries(StepFlag f) const;
  std::vector<Quad> full_entries(StepFlag f) const;

  std::optional<Witness> core_witness(const Quad& t, StepFlag f) const;
  std::optional<Witness> full_witness(const Quad& t, StepFlag f) const;

 private:
  friend CoupledRelation coupled_relations(const Dvpa& dvpa, const FlaggedRelation& wm);

  struct CoreDerivation {
    bool base = true;
    Symbol call;
    StateId after_call = 0;
    StackId push = 0;
    StepFlag inner_flag = StepFlag::avoid;  // wm (base) or full (step)
    StateId before_return = 0;              // d1 (base) or ẽ (step)
    Symbol ret;
  };
  struct FullDerivation {
    StateId mid = 0;  // q̃
    StepFlag lead_flag = StepFlag::avoid;
    StepFlag core_flag = StepFlag::avoid;
    StateId core_end = 0;  // ẽ
  };

  std::size_t index(const Quad& t) const { return ((t.q * n_ + t.p) * n_ + t.d) * n_ + t.d2; }
  std::size_t dkey(const Quad& t, StepFlag f) const { return index(t) * 2 + (f == StepFlag::sees ? 0 : 1); }
  Quad unindex(std::size_t i) const;

  std::size_t n_ = 0;
  FlaggedRelation wm_;
  std::vector<std::uint8_t> core_;
  std::vector<std::uint8_t> full_;
  std::unordered_map<std::size_t, CoreDerivation> core_derivations_;
  std::unordered_map<std::size_t, FullDerivation> full_derivations_;
};

/// Requires a Büchi-kind or parity-kind acceptance (accepting() is used).
CoupledRelation coupled_relations(const Dvpa& dvpa, const FlaggedRelation& wm);
CoupledRelation coupled_relations(const Dvpa& dvpa);

}  // namespace stairvpa
