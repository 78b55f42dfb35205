#include "stairvpa/stair_removal.hpp"

#include <algorithm>
#include <deque>
#include <functional>

#include "stairvpa/errors.hpp"
#include "stairvpa/run.hpp"

namespace stairvpa {

namespace {

void require_stair_buchi(const Dvpa& dvpa) {
  if (dvpa.acceptance().kind != AcceptanceKind::stair_buchi)
    throw SemanticError("stair removal needs a stair-buchi automaton");
}

bool is_final(const Dvpa& dvpa, StateId q) { return dvpa.acceptance().final_states.at(q); }

}  // namespace

std::vector<StatePair> PrecedesRelation::reflexive() const {
  std::vector<StatePair> out;
  for (const auto& [key, aux] : pairs_)
    if (key.first == key.second) out.push_back(key.first);
  return out;
}

bool PrecedesRelation::is_transitive() const {
  std::map<StatePair, std::vector<StatePair>> above;
  for (const auto& [key, aux] : pairs_) above[key.first].push_back(key.second);
  for (const auto& [key, aux] : pairs_) {
    auto it = above.find(key.second);
    if (it == above.end()) continue;
    for (const StatePair& top : it->second)
      if (!contains(key.first, top)) return false;
  }
  return true;
}

PrecedesRelation precedes(const Dvpa& dvpa) {
  require_stair_buchi(dvpa);
  FlaggedRelation wm = wm_summaries(dvpa);
  CoupledRelation cud = coupled_relations(dvpa, wm);
  Reachability reach = reachable(dvpa, wm);
  return precedes(dvpa, wm, cud, reach);
}

PrecedesRelation precedes(const Dvpa& dvpa, const FlaggedRelation& wm, const CoupledRelation& cud,
                          const Reachability& reach) {
  require_stair_buchi(dvpa);
  const std::size_t n = dvpa.num_states();
  std::vector<StateId> candidates;
  for (StateId s = 0; s < n; ++s)
    if (!is_final(dvpa, s) && reach.states[s]) candidates.push_back(s);

  PrecedesRelation out;
  for (StateId q : candidates) {
    for (StateId q1 : candidates) {
      for (StateId p : candidates) {
        for (StateId p1 : candidates) {
          if (!wm.avoid(p, p1)) continue;
          for (StateId p2 = 0; p2 < n; ++p2) {
            if (!cud.core({q, p, p2, q1}, StepFlag::sees)) continue;
            if (!wm.reach(p, p2)) continue;
            if (!wm.avoid(p1, p) && !cud.full({p1, p, p2, p2}, StepFlag::avoid)) continue;
            out.pairs_.emplace(std::pair{StatePair{p, p1}, StatePair{q, q1}}, p2);
            break;
          }
        }
      }
    }
  }
  return out;
}

std::vector<std::string> replay_pattern(const Dvpa& dvpa, const PatternWitness& pw) {
  std::vector<std::string> failures;
  const auto& names = dvpa.state_names();
  auto expect = [&](const std::string& label, StateId from, const std::vector<StackId>& from_stack, const Word& word,
                    StateId to, const std::vector<StackId>& to_stack, std::optional<bool> sees) {
    RunTrace t = run_word(dvpa, Configuration{from, from_stack}, word);
    if (t.death()) {
      failures.push_back(label + ": run halts at position " + std::to_string(*t.death()));
      return;
    }
    Configuration end = t.last();
    if (end.state != to) failures.push_back(label + ": ends in " + names[end.state] + ", expected " + names[to]);
    if (end.stack != to_stack) failures.push_back(label + ": ends with the wrong stack");
    if (sees && *sees && t.f_on_step_count() == 0) failures.push_back(label + ": no final state on a step");
    if (sees && !*sees && t.f_on_step_count() != 0) failures.push_back(label + ": final state on a step");
  };
  if (is_final(dvpa, pw.q)) failures.push_back("q is final");
  if (is_final(dvpa, pw.q1)) failures.push_back("q' is final");
  if (pw.sigma.empty()) failures.push_back("sigma is empty");
  expect("u", pw.q, {}, pw.u, pw.q, pw.sigma, true);
  expect("v", pw.q, {}, pw.v, pw.q1, {}, false);
  expect("w", pw.q1, {}, pw.w, pw.q, pw.sigma_prime, false);
  expect("x", pw.q, {}, pw.x, pw.q2, {}, std::nullopt);
  expect("y", pw.q2, pw.sigma_prime, pw.y, pw.q2, {}, std::nullopt);
  expect("z", pw.q2, pw.sigma, pw.z, pw.q1, {}, std::nullopt);
  Word all;
  for (const Word* part : {&pw.u, &pw.v, &pw.w, &pw.x, &pw.y, &pw.z}) all.insert(all.end(), part->begin(), part->end());
  if (!is_minimally_well_matched(all)) failures.push_back("uvwxyz is not minimally well-matched");
  return failures;
}

RemovalCheck check_removable(const Dvpa& dvpa) {
  require_stair_buchi(dvpa);
  FlaggedRelation wm = wm_summaries(dvpa);
  CoupledRelation cud = coupled_relations(dvpa, wm);
  Reachability reach = reachable(dvpa, wm);
  PrecedesRelation order = precedes(dvpa, wm, cud, reach);

  RemovalCheck out;
  const auto loops = order.reflexive();
  if (loops.empty()) return out;

  const StatePair pair = loops.front();
  PatternWitness pw;
  pw.q = pair.first;
  pw.q1 = pair.second;
  pw.q2 = order.auxiliary(pair, pair);

  auto outer = cud.core_witness({pw.q, pw.q, pw.q2, pw.q1}, StepFlag::sees);
  pw.u = outer->ascent;
  pw.z = outer->descent;
  pw.sigma = outer->stack;
  pw.v = *wm.witness(pw.q, pw.q1, StepFlag::avoid);
  pw.x = *wm.witness(pw.q, pw.q2);
  if (wm.avoid(pw.q1, pw.q)) {
    pw.w = *wm.witness(pw.q1, pw.q, StepFlag::avoid);
  } else {
    auto inner = cud.full_witness({pw.q1, pw.q, pw.q2, pw.q2}, StepFlag::avoid);
    pw.w = inner->ascent;
    pw.y = inner->descent;
    pw.sigma_prime = inner->stack;
  }

  if (auto failures = replay_pattern(dvpa, pw); !failures.empty())
    throw InternalError("reconstructed pattern does not replay: " + failures.front());
  out.pattern = std::move(pw);
  return out;
}

HeightFunction heights(const Dvpa& dvpa) { return heights(dvpa, precedes(dvpa)); }

HeightFunction heights(const Dvpa& dvpa, const PrecedesRelation& order) {
  require_stair_buchi(dvpa);
  std::map<StatePair, std::vector<StatePair>> below;
  for (const auto& [key, aux] : order.pairs()) below[key.second].push_back(key.first);

  HeightFunction out;
  std::map<StatePair, int> mark;  // 1 = in progress, 2 = done
  std::function<unsigned(StatePair)> height = [&](StatePair pair) -> unsigned {
    int& m = mark[pair];
    if (m == 2) return out.ht.at(pair);
    if (m == 1) throw SemanticError("the pair order has a cycle; the automaton has a forbidden pattern");
    m = 1;
    unsigned best = 0;
    if (auto it = below.find(pair); it != below.end())
      for (const StatePair& lower : it->second) best = std::max(best, height(lower));
    mark[pair] = 2;
    out.ht[pair] = best + 1;
    return best + 1;
  };

  for (StateId a = 0; a < dvpa.num_states(); ++a) {
    if (is_final(dvpa, a)) continue;
    for (StateId b = 0; b < dvpa.num_states(); ++b) {
      if (is_final(dvpa, b)) continue;
      out.h = std::max(out.h, height({a, b}));
    }
  }
  return out;
}

bool flags_monotone(const ProductState& s) {
  for (std::size_t i = 0; i < s.flags.size(); ++i) {
    if (!s.flags[i]) continue;
    for (std::size_t j = i; j < s.flags.size(); ++j)
      if (!s.flags[j] || s.counters[i] < s.counters[j]) return false;
  }
  return true;
}

ParityConstruction build_parity(const Dvpa& dvpa, const BuildOptions& options) {
  require_stair_buchi(dvpa);
  RemovalCheck check = check_removable(dvpa);
  if (!check.removable()) throw SemanticError("automaton has a forbidden pattern; no equivalent parity automaton exists");
  return build_parity(dvpa, heights(dvpa), options);
}

namespace {

class ProductBuilder {
 public:
  ProductBuilder(const Dvpa& dvpa, const HeightFunction& height, const BuildOptions& options)
      : dvpa_(dvpa), height_(height), options_(options), builder_(dvpa.alphabet()) {
    const std::size_t n = dvpa.num_states();
    m_ = static_cast<unsigned>(n * n * n + 1);
    levels_ = height.h + 1;
  }

  ParityConstruction run() {
    ProductState init{dvpa_.initial(), std::vector<std::uint32_t>(levels_, 0), std::vector<std::uint8_t>(levels_, 1)};
    builder_.set_initial(intern(init));
    add_pair(0, std::nullopt);
    while (!work_.empty()) {
      auto [s, surface] = work_.front();
      work_.pop_front();
      process(s, surface);
    }

    AcceptanceSpec acc;
    acc.kind = AcceptanceKind::parity;
    for (const ProductState& s : states_) acc.priorities.push_back(priority(s));
    ParityConstruction out{std::move(builder_).build(std::move(acc)), std::move(states_), std::move(symbols_), m_, height_};
    return out;
  }

 private:
  using Surface = std::optional<StackId>;

  unsigned priority(const ProductState& s) const {
    std::optional<std::size_t> top;
    for (std::size_t i = 0; i < levels_; ++i)
      if (s.counters[i] == m_) top = i;
    if (!top) return 0;
    return static_cast<unsigned>(2 * *top + 1 + s.flags[*top]);
  }

  ProductState reset(StateId q) const {
    return {q, std::vector<std::uint32_t>(levels_, 0), std::vector<std::uint8_t>(levels_, 1)};
  }

  /// Successor after a call or internal move into q.
  ProductState advance(const ProductState& s, StateId q) const {
    if (is_final(dvpa_, q)) return reset(q);
    ProductState t{q, s.counters, s.flags};
    for (std::size_t i = 0; i < levels_; ++i) {
      t.counters[i] = s.counters[i] % m_ + (i == 0 ? 1 : 0);
      t.flags[i] = s.counters[i] < m_ ? s.flags[i] : 0;
    }
    return t;
  }

  /// Successor after a return into q that pops a symbol saved in `saved`.
  ProductState close(const ProductState& saved, StateId q) const {
    if (is_final(dvpa_, q)) return reset(q);
    ProductState t{q, saved.counters, saved.flags};
    const bool counts = !is_final(dvpa_, saved.state);
    const unsigned limit = counts ? height_.at(saved.state, q) : 0;
    for (std::size_t i = 0; i < levels_; ++i) {
      t.counters[i] = saved.counters[i] % m_ + (counts && i <= limit ? 1 : 0);
      t.flags[i] = saved.counters[i] < m_ ? saved.flags[i] : 0;
    }
    return t;
  }

  std::string name(const ProductState& s) const {
    std::string out = dvpa_.state_name(s.state) + "|c";
    for (std::size_t i = 0; i < levels_; ++i) out += (i ? "." : "") + std::to_string(s.counters[i]);
    out += "|f";
    for (std::uint8_t f : s.flags) out += f ? '1' : '0';
    return out;
  }

  StateId intern(const ProductState& s) {
    auto [it, fresh] = state_ids_.emplace(s, static_cast<StateId>(states_.size()));
    if (fresh) {
      if (states_.size() >= options_.state_cap)
        throw ResourceLimitError("parity construction exceeds the cap of " + std::to_string(options_.state_cap) +
                                 " states");
      states_.push_back(s);
      builder_.add_state(name(s));
      expanded_.push_back(false);
    }
    return it->second;
  }

  StackId symbol(StackId z, StateId saved) {
    auto [it, fresh] = symbol_ids_.emplace(std::pair{z, saved}, static_cast<StackId>(symbols_.size()));
    if (fresh) {
      if (symbols_.size() >= options_.state_cap)
        throw ResourceLimitError("parity construction exceeds the cap of " + std::to_string(options_.state_cap) +
                                 " stack symbols");
      symbols_.push_back({z, saved});
      builder_.add_stack_symbol(dvpa_.stack_name(z) + "@" + builder_name(saved));
      below_.emplace_back();
      return_targets_.emplace_back();
    }
    return it->second;
  }

  std::string builder_name(StateId s) const { return name(states_[s]); }

  void add_pair(StateId s, Surface surface) {
    if (pairs_.insert({s, surface}).second) work_.push_back({s, surface});
  }

  void expand(StateId s) {
    if (expanded_[s]) return;
    expanded_[s] = true;
    const std::size_t calls = dvpa_.alphabet().calls().size();
    const std::size_t internals = dvpa_.alphabet().internals().size();
    for (std::uint32_t i = 0; i < internals; ++i) {
      auto q = dvpa_.internal(states_[s].state, i);
      if (!q) continue;
      StateId t = intern(advance(states_[s], *q));
      builder_.set_internal(s, i, t);
      internal_succ_[s].push_back(t);
    }
    for (std::uint32_t c = 0; c < calls; ++c) {
      auto target = dvpa_.call(states_[s].state, c);
      if (!target) continue;
      StateId t = intern(advance(states_[s], target->state));
      StackId z = symbol(target->push, s);
      builder_.set_call(s, c, t, z);
      call_succ_[s].push_back({t, z});
    }
  }

  void process(StateId s, Surface surface) {
    expand(s);
    for (StateId t : internal_succ_[s]) add_pair(t, surface);
    for (const auto& [t, z] : call_succ_[s]) {
      if (below_[z].insert(surface).second)
        for (StateId after : return_targets_[z]) add_pair(after, surface);
      add_pair(t, z);
    }
    if (!surface) return;
    const StackId z = *surface;
    const auto [orig, saved] = symbols_[z];
    for (std::uint32_t r = 0; r < dvpa_.alphabet().returns().size(); ++r) {
      auto q = dvpa_.ret(states_[s].state, orig, r);
      if (!q) continue;
      const ProductState next = close(states_[saved], *q);
      StateId t = intern(next);
      builder_.set_return(s, z, r, t);
      return_targets_[z].push_back(t);
      for (const Surface& b : below_[z]) add_pair(t, b);
    }
  }

  const Dvpa& dvpa_;
  const HeightFunction& height_;
  BuildOptions options_;
  DvpaBuilder builder_;
  unsigned m_ = 0;
  std::size_t levels_ = 1;

  std::vector<ProductState> states_;
  std::map<ProductState, StateId> state_ids_;
  std::vector<bool> expanded_;
  std::map<StateId, std::vector<StateId>> internal_succ_;
  std::map<StateId, std::vector<std::pair<StateId, StackId>>> call_succ_;

  std::vector<std::pair<StackId, StateId>> symbols_;
  std::map<std::pair<StackId, StateId>, StackId> symbol_ids_;
  std::vector<std::set<Surface>> below_;
  std::vector<std::vector<StateId>> return_targets_;

  std::set<std::pair<StateId, Surface>> pairs_;
  std::deque<std::pair<StateId, Surface>> work_;
};

}  // namespace

ParityConstruction build_parity(const Dvpa& dvpa, const HeightFunction& height, const BuildOptions& options) {
  require_stair_buchi(dvpa);
  return ProductBuilder(dvpa, height, options).run();
}

}  // namespace stairvpa
