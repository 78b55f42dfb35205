#include "stairvpa/summaries.hpp"

#include <deque>
#include <tuple>

#include "stairvpa/errors.hpp"

namespace stairvpa {

namespace {

StepFlag flag_of(const Dvpa& dvpa, StateId q) {
  return dvpa.acceptance().accepting(q) ? StepFlag::sees : StepFlag::avoid;
}

constexpr StepFlag kFlags[] = {StepFlag::sees, StepFlag::avoid};

struct CallEdge {
  StateId from;
  Symbol call;
  StackId push;
};

/// calls_into[p]: every call transition whose target is p.
std::vector<std::vector<CallEdge>> calls_into(const Dvpa& dvpa) {
  std::vector<std::vector<CallEdge>> out(dvpa.num_states());
  for (StateId q = 0; q < dvpa.num_states(); ++q)
    for (std::uint32_t c = 0; c < dvpa.alphabet().calls().size(); ++c)
      if (auto t = dvpa.call(q, c)) out[t->state].push_back({q, Symbol{SymbolKind::call, c}, t->push});
  return out;
}

struct ReturnEdge {
  StateId from;
  Symbol ret;
  StateId to;
};

/// returns_popping[Z]: every return transition that pops Z.
std::vector<std::vector<ReturnEdge>> returns_popping(const Dvpa& dvpa) {
  std::vector<std::vector<ReturnEdge>> out(dvpa.num_stack_symbols());
  for (const auto& e : dvpa.return_transitions()) out[e.pop].push_back({e.from, Symbol{SymbolKind::ret, e.symbol}, e.to});
  return out;
}

void append(Word& out, const Word& w) { out.insert(out.end(), w.begin(), w.end()); }

}  // namespace

std::optional<Word> FlaggedRelation::witness(StateId q, StateId q2, StepFlag f) const {
  if (!has(q, q2, f)) return std::nullopt;
  const Derivation& d = derivations_[key(q, q2, f)];
  switch (d.rule) {
    case Derivation::Rule::base:
      return Word{};
    case Derivation::Rule::internal: {
      Word w = *witness(q, d.mid, d.mid_flag);
      w.push_back(d.first);
      return w;
    }
    case Derivation::Rule::surround: {
      Word w = *witness(q, d.mid, d.mid_flag);
      w.push_back(d.first);
      append(w, *witness(d.inner_from, d.inner_to, d.inner_flag));
      w.push_back(d.last);
      return w;
    }
  }
  return std::nullopt;
}

std::optional<Word> FlaggedRelation::witness(StateId q, StateId q2) const {
  if (has(q, q2, StepFlag::avoid)) return witness(q, q2, StepFlag::avoid);
  return witness(q, q2, StepFlag::sees);
}

FlaggedRelation wm_summaries(const Dvpa& dvpa) {
  const std::size_t n = dvpa.num_states();
  FlaggedRelation rel(n);
  rel.derivations_.resize(n * n * 2);
  const auto into = calls_into(dvpa);
  const auto& alphabet = dvpa.alphabet();

  struct Item {
    StateId q, q2;
    StepFlag flag;
    bool first;  // (q, q2) was unreachable before this entry
  };
  std::deque<Item> work;

  auto add = [&](StateId q, StateId q2, StepFlag f, const FlaggedRelation::Derivation& d) {
    std::uint8_t& b = rel.bits_[q * n + q2];
    if (b & bit(f)) return;
    const bool first = b == 0;
    b |= bit(f);
    rel.derivations_[rel.key(q, q2, f)] = d;
    work.push_back({q, q2, f, first});
  };

  for (StateId q = 0; q < n; ++q) add(q, q, flag_of(dvpa, q), {});

  while (!work.empty()) {
    const Item it = work.front();
    work.pop_front();
    const StateId q = it.q;
    const StateId q1 = it.q2;

    for (std::uint32_t i = 0; i < alphabet.internals().size(); ++i) {
      if (auto q2 = dvpa.internal(q1, i)) {
        FlaggedRelation::Derivation d;
        d.rule = FlaggedRelation::Derivation::Rule::internal;
        d.mid = q1;
        d.mid_flag = it.flag;
        d.first = Symbol{SymbolKind::internal, i};
        add(q, *q2, join(it.flag, flag_of(dvpa, *q2)), d);
      }
    }

    // (q, q1) as the outer prefix: q1 -c-> p, p ~> p', p' -r/Z-> q2.
    for (std::uint32_t c = 0; c < alphabet.calls().size(); ++c) {
      auto call = dvpa.call(q1, c);
      if (!call) continue;
      for (StateId p2 = 0; p2 < n; ++p2) {
        const std::uint8_t inner = rel.bits_[call->state * n + p2];
        if (!inner) continue;
        for (std::uint32_t r = 0; r < alphabet.returns().size(); ++r) {
          if (auto q2 = dvpa.ret(p2, call->push, r)) {
            FlaggedRelation::Derivation d;
            d.rule = FlaggedRelation::Derivation::Rule::surround;
            d.mid = q1;
            d.mid_flag = it.flag;
            d.first = Symbol{SymbolKind::call, c};
            d.last = Symbol{SymbolKind::ret, r};
            d.inner_from = call->state;
            d.inner_to = p2;
            d.inner_flag = (inner & bit(StepFlag::avoid)) ? StepFlag::avoid : StepFlag::sees;
            add(q, *q2, join(it.flag, flag_of(dvpa, *q2)), d);
          }
        }
      }
    }

    // (q, q1) as a newly reachable interior: x -c/Z-> q, q ~> q1, q1 -r/Z-> q2.
    if (it.first) {
      for (const CallEdge& e : into[q]) {
        for (std::uint32_t r = 0; r < alphabet.returns().size(); ++r) {
          auto q2 = dvpa.ret(q1, e.push, r);
          if (!q2) continue;
          for (StateId y = 0; y < n; ++y) {
            for (StepFlag f : kFlags) {
              if (!rel.has(y, e.from, f)) continue;
              FlaggedRelation::Derivation d;
              d.rule = FlaggedRelation::Derivation::Rule::surround;
              d.mid = e.from;
              d.mid_flag = f;
              d.first = e.call;
              d.last = Symbol{SymbolKind::ret, r};
              d.inner_from = q;
              d.inner_to = q1;
              d.inner_flag = it.flag;
              add(y, *q2, join(f, flag_of(dvpa, *q2)), d);
            }
          }
        }
      }
    }
  }
  return rel;
}

std::optional<Word> Reachability::access_word(StateId q) const {
  for (const auto& [key, parent] : parents) {
    if (key.first != q) continue;
    std::vector<const Word*> segments;
    auto cur = key;
    for (;;) {
      const auto& p = parents.at(cur);
      if (!p) break;
      segments.push_back(&p->segment);
      cur = {p->state, p->surface};
    }
    Word out;
    for (auto it = segments.rbegin(); it != segments.rend(); ++it) append(out, **it);
    return out;
  }
  return std::nullopt;
}

Reachability reachable(const Dvpa& dvpa) { return reachable(dvpa, wm_summaries(dvpa)); }

Reachability reachable(const Dvpa& dvpa, const FlaggedRelation& wm) {
  // Every run splits into well-matched segments and pending calls, so
  // closing under wm-reachability and single calls reaches every
  // (state, stack top) pair; returns are covered by the wm segments.
  Reachability out;
  out.states.assign(dvpa.num_states(), false);
  using Key = std::pair<StateId, std::optional<StackId>>;
  std::deque<Key> work;
  auto add = [&](Key k, std::optional<Reachability::Parent> parent) {
    if (!out.surfaces.insert(k).second) return;
    out.states[k.first] = true;
    out.parents.emplace(k, std::move(parent));
    work.push_back(k);
  };
  add({dvpa.initial(), std::nullopt}, std::nullopt);
  while (!work.empty()) {
    const Key k = work.front();
    work.pop_front();
    for (StateId q2 = 0; q2 < dvpa.num_states(); ++q2)
      if (q2 != k.first && wm.reach(k.first, q2)) add({q2, k.second}, Reachability::Parent{k.first, k.second, *wm.witness(k.first, q2)});
    for (std::uint32_t c = 0; c < dvpa.alphabet().calls().size(); ++c)
      if (auto t = dvpa.call(k.first, c))
        add({t->state, t->push}, Reachability::Parent{k.first, k.second, Word{Symbol{SymbolKind::call, c}}});
  }
  return out;
}

StepGraph step_graph(const Dvpa& dvpa, bool pending_calls) { return step_graph(dvpa, wm_summaries(dvpa), pending_calls); }

StepGraph step_graph(const Dvpa& dvpa, const FlaggedRelation& wm, bool pending_calls) {
  const std::size_t n = dvpa.num_states();
  const auto& alphabet = dvpa.alphabet();
  std::vector<std::set<StateId>> succ(n);
  for (StateId q = 0; q < n; ++q) {
    for (std::uint32_t i = 0; i < alphabet.internals().size(); ++i)
      if (auto p = dvpa.internal(q, i)) succ[q].insert(*p);
    for (std::uint32_t c = 0; c < alphabet.calls().size(); ++c) {
      auto call = dvpa.call(q, c);
      if (!call) continue;
      if (pending_calls) succ[q].insert(call->state);
      for (StateId p2 = 0; p2 < n; ++p2) {
        if (!wm.reach(call->state, p2)) continue;
        for (std::uint32_t r = 0; r < alphabet.returns().size(); ++r)
          if (auto p = dvpa.ret(p2, call->push, r)) succ[q].insert(*p);
      }
    }
  }

  StepGraph g;
  std::vector<bool> seen(n, false);
  std::deque<StateId> work{dvpa.initial()};
  seen[dvpa.initial()] = true;
  while (!work.empty()) {
    StateId q = work.front();
    work.pop_front();
    for (StateId p : succ[q]) {
      g.edges.insert({q, p});
      if (!seen[p]) {
        seen[p] = true;
        work.push_back(p);
      }
    }
  }
  for (StateId q = 0; q < n; ++q) {
    if (!seen[q]) continue;
    g.vertices.push_back(q);
    g.vertex_priority[q] = dvpa.acceptance().priority(q);
  }
  return g;
}

CoupledRelation::Quad CoupledRelation::unindex(std::size_t i) const {
  Quad t{};
  t.d2 = static_cast<StateId>(i % n_);
  i /= n_;
  t.d = static_cast<StateId>(i % n_);
  i /= n_;
  t.p = static_cast<StateId>(i % n_);
  t.q = static_cast<StateId>(i / n_);
  return t;
}

std::vector<CoupledRelation::Quad> CoupledRelation::core_entries(StepFlag f) const {
  std::vector<Quad> out;
  for (std::size_t i = 0; i < core_.size(); ++i)
    if (core_[i] & bit(f)) out.push_back(unindex(i));
  return out;
}

std::vector<CoupledRelation::Quad> CoupledRelation::full_entries(StepFlag f) const {
  std::vector<Quad> out;
  for (std::size_t i = 0; i < full_.size(); ++i)
    if (full_[i] & bit(f)) out.push_back(unindex(i));
  return out;
}

std::optional<CoupledRelation::Witness> CoupledRelation::core_witness(const Quad& t, StepFlag f) const {
  if (!core(t, f)) return std::nullopt;
  const CoreDerivation& d = core_derivations_.at(dkey(t, f));
  Witness w;
  w.ascent.push_back(d.call);
  if (d.base) {
    append(w.ascent, *wm_.witness(d.after_call, t.p, d.inner_flag));
    w.descent = *wm_.witness(t.d, d.before_return);
    w.stack = {d.push};
  } else {
    Witness inner = *full_witness({d.after_call, t.p, t.d, d.before_return}, d.inner_flag);
    append(w.ascent, inner.ascent);
    w.descent = std::move(inner.descent);
    w.stack.push_back(d.push);
    w.stack.insert(w.stack.end(), inner.stack.begin(), inner.stack.end());
  }
  w.descent.push_back(d.ret);
  return w;
}

std::optional<CoupledRelation::Witness> CoupledRelation::full_witness(const Quad& t, StepFlag f) const {
  if (!full(t, f)) return std::nullopt;
  const FullDerivation& d = full_derivations_.at(dkey(t, f));
  Witness core = *core_witness({d.mid, t.p, t.d, d.core_end}, d.core_flag);
  Witness w;
  w.ascent = *wm_.witness(t.q, d.mid, d.lead_flag);
  append(w.ascent, core.ascent);
  w.descent = std::move(core.descent);
  append(w.descent, *wm_.witness(d.core_end, t.d2));
  w.stack = std::move(core.stack);
  return w;
}

CoupledRelation coupled_relations(const Dvpa& dvpa) { return coupled_relations(dvpa, wm_summaries(dvpa)); }

CoupledRelation coupled_relations(const Dvpa& dvpa, const FlaggedRelation& wm) {
  const std::size_t n = dvpa.num_states();
  const double cells = static_cast<double>(n) * n * n * n;
  if (cells > 64e6) throw ResourceLimitError("coupled relations over " + std::to_string(n) + " states are too large");

  CoupledRelation rel;
  rel.n_ = n;
  rel.wm_ = wm;
  rel.core_.assign(n * n * n * n, 0);
  rel.full_.assign(n * n * n * n, 0);
  const auto into = calls_into(dvpa);
  const auto popping = returns_popping(dvpa);

  using Quad = CoupledRelation::Quad;
  struct Item {
    bool core;
    Quad t;
    StepFlag flag;
  };
  std::deque<Item> work;

  auto add_core = [&](const Quad& t, StepFlag f, const CoupledRelation::CoreDerivation& d) {
    std::uint8_t& b = rel.core_[rel.index(t)];
    if (b & bit(f)) return;
    b |= bit(f);
    rel.core_derivations_.emplace(rel.dkey(t, f), d);
    work.push_back({true, t, f});
  };
  auto add_full = [&](const Quad& t, StepFlag f, const CoupledRelation::FullDerivation& d) {
    std::uint8_t& b = rel.full_[rel.index(t)];
    if (b & bit(f)) return;
    b |= bit(f);
    rel.full_derivations_.emplace(rel.dkey(t, f), d);
    work.push_back({false, t, f});
  };

  // Single pushed symbol: q -c/Z-> q2, q2 ~> p well-matched, d ~> d1, d1 -r/Z-> d'.
  for (StateId q = 0; q < n; ++q) {
    for (std::uint32_t c = 0; c < dvpa.alphabet().calls().size(); ++c) {
      auto call = dvpa.call(q, c);
      if (!call) continue;
      for (StateId p = 0; p < n; ++p) {
        for (StepFlag f : kFlags) {
          if (!wm.has(call->state, p, f)) continue;
          for (const ReturnEdge& e : popping[call->push]) {
            for (StateId d = 0; d < n; ++d) {
              if (!wm.reach(d, e.from)) continue;
              CoupledRelation::CoreDerivation der;
              der.base = true;
              der.call = Symbol{SymbolKind::call, c};
              der.after_call = call->state;
              der.push = call->push;
              der.inner_flag = f;
              der.before_return = e.from;
              der.ret = e.ret;
              add_core({q, p, d, e.to}, join(f, flag_of(dvpa, q)), der);
            }
          }
        }
      }
    }
  }

  while (!work.empty()) {
    const Item it = work.front();
    work.pop_front();
    if (it.core) {
      // full(q, p, d, d') from wm(q, q̃), core(q̃, p, d, ẽ), wm(ẽ, d').
      const StateId mid = it.t.q;
      const StateId end = it.t.d2;
      for (StateId q = 0; q < n; ++q) {
        for (StepFlag lead : kFlags) {
          if (!wm.has(q, mid, lead)) continue;
          for (StateId d2 = 0; d2 < n; ++d2) {
            if (!wm.reach(end, d2)) continue;
            add_full({q, it.t.p, it.t.d, d2}, join(lead, it.flag),
                     CoupledRelation::FullDerivation{mid, lead, it.flag, end});
          }
        }
      }
    } else {
      // core(q, p, d, d') from q -c/Z-> q2, full(q2, p, d, ẽ), ẽ -r/Z-> d'.
      const StateId q2 = it.t.q;
      const StateId end = it.t.d2;
      for (const CallEdge& e : into[q2]) {
        for (std::uint32_t r = 0; r < dvpa.alphabet().returns().size(); ++r) {
          auto d2 = dvpa.ret(end, e.push, r);
          if (!d2) continue;
          CoupledRelation::CoreDerivation der;
          der.base = false;
          der.call = e.call;
          der.after_call = q2;
          der.push = e.push;
          der.inner_flag = it.flag;
          der.before_return = end;
          der.ret = Symbol{SymbolKind::ret, r};
          add_core({e.from, it.t.p, it.t.d, *d2}, join(it.flag, flag_of(dvpa, e.from)), der);
        }
      }
    }
  }
  return rel;
}

}  // namespace stairvpa
