#include "support.hpp"

#include <algorithm>
#include <functional>

#include "stairvpa/format.hpp"
#include "stairvpa/run.hpp"

namespace testing {

std::string fixture_path(const std::string& name) { return std::string(STAIRVPA_FIXTURES) + "/" + name; }

Dvpa fixture(const std::string& name) { return load_automaton(fixture_path(name)).dvpa; }

Dvpa parse(const std::string& text) { return parse_automaton(text).dvpa; }

std::vector<std::string> small_fixtures() {
  return {"fig2.vpa",  "lsu.vpa",          "lsu-buchi.vpa", "simple.vpa",  "empty.vpa",
          "full.vpa",  "infinitely-a.vpa", "matched.vpa",   "pending.vpa"};
}

namespace {

struct Frame {
  StateId state;
  std::vector<StackId> stack;
};

std::optional<Frame> step(const Dvpa& dvpa, const Frame& f, Symbol s) {
  Frame out = f;
  switch (s.kind) {
    case SymbolKind::internal: {
      auto t = dvpa.internal(f.state, s.index);
      if (!t) return std::nullopt;
      out.state = *t;
      return out;
    }
    case SymbolKind::call: {
      auto t = dvpa.call(f.state, s.index);
      if (!t) return std::nullopt;
      out.state = t->state;
      out.stack.push_back(t->push);
      return out;
    }
    case SymbolKind::ret: {
      if (f.stack.empty()) return std::nullopt;
      auto t = dvpa.ret(f.state, f.stack.back(), s.index);
      if (!t) return std::nullopt;
      out.state = *t;
      out.stack.pop_back();
      return out;
    }
  }
  return std::nullopt;
}

}  // namespace

std::map<std::pair<StateId, StateId>, std::uint8_t> brute_wm(const Dvpa& dvpa, std::size_t max_len) {
  std::map<std::pair<StateId, StateId>, std::uint8_t> out;
  const auto symbols = dvpa.alphabet().symbols();
  const auto& acc = dvpa.acceptance();
  for (StateId q = 0; q < dvpa.num_states(); ++q) {
    std::function<void(const Frame&, std::size_t, bool)> dfs = [&](const Frame& f, std::size_t len, bool seen) {
      if (f.stack.empty()) out[{q, f.state}] |= seen ? 1 : 2;
      if (len == max_len) return;
      for (Symbol s : symbols) {
        auto next = step(dvpa, f, s);
        // a prefix that cannot close again within the budget is useless
        if (!next || next->stack.size() > max_len - len - 1) continue;
        const bool base = next->stack.empty();
        dfs(*next, len + 1, seen || (base && acc.accepting(next->state)));
      }
    };
    dfs(Frame{q, {}}, 0, acc.accepting(q));
  }
  return out;
}

BruteSteps brute_steps(const Dvpa& dvpa, std::size_t max_len) {
  BruteSteps out;
  const auto symbols = dvpa.alphabet().symbols();
  std::vector<StateId> states;
  std::vector<std::size_t> heights;
  std::function<void(const Frame&)> dfs = [&](const Frame& f) {
    states.push_back(f.state);
    heights.push_back(f.stack.size());
    // steps of this prefix
    std::vector<bool> is_step = step_flags(heights);
    std::optional<StateId> prev;
    for (std::size_t i = 0; i < states.size(); ++i) {
      if (!is_step[i]) continue;
      out.vertices.insert(states[i]);
      if (prev) out.edges.insert({*prev, states[i]});
      prev = states[i];
    }
    if (states.size() <= max_len)
      for (Symbol s : symbols)
        if (auto next = step(dvpa, f, s)) dfs(*next);
    states.pop_back();
    heights.pop_back();
  };
  dfs(Frame{dvpa.initial(), {}});
  return out;
}

std::map<CoupledRelation::Quad, std::uint8_t> brute_core(const Dvpa& dvpa, std::size_t max_len) {
  const auto symbols = dvpa.alphabet().symbols();
  const auto& acc = dvpa.acceptance();
  // σ -> (q, p, flag bit) for ascents, σ -> (d, d') for descents
  std::map<std::vector<StackId>, std::set<std::tuple<StateId, StateId, std::uint8_t>>> ascents;
  std::map<std::vector<StackId>, std::set<std::pair<StateId, StateId>>> descents;

  for (StateId q = 0; q < dvpa.num_states(); ++q) {
    std::vector<std::size_t> heights{0};
    std::vector<StateId> states{q};
    std::function<void(const Frame&, std::size_t)> up = [&](const Frame& f, std::size_t len) {
      if (len > 0) {
        const auto steps = step_flags(heights);
        bool seen = false;
        for (std::size_t i = 0; i < states.size(); ++i) seen = seen || (steps[i] && acc.accepting(states[i]));
        ascents[f.stack].insert({q, f.state, static_cast<std::uint8_t>(seen ? 1 : 2)});
      }
      if (len == max_len) return;
      for (Symbol s : symbols) {
        if (len == 0 && s.kind != SymbolKind::call) continue;
        if (s.kind == SymbolKind::ret && f.stack.size() <= 1) continue;  // keep the bottom symbol
        auto next = step(dvpa, f, s);
        if (!next) continue;
        heights.push_back(next->stack.size());
        states.push_back(next->state);
        up(*next, len + 1);
        heights.pop_back();
        states.pop_back();
      }
    };
    up(Frame{q, {}}, 0);
  }

  for (const auto& [sigma, unused] : ascents) {
    for (StateId d = 0; d < dvpa.num_states(); ++d) {
      std::function<void(const Frame&, std::size_t)> down = [&](const Frame& f, std::size_t len) {
        if (f.stack.empty()) {
          descents[sigma].insert({d, f.state});
          return;
        }
        if (len == max_len) return;
        for (Symbol s : symbols) {
          auto next = step(dvpa, f, s);
          if (next) down(*next, len + 1);
        }
      };
      down(Frame{d, sigma}, 0);
    }
  }

  std::map<CoupledRelation::Quad, std::uint8_t> out;
  for (const auto& [sigma, ups] : ascents) {
    auto it = descents.find(sigma);
    if (it == descents.end()) continue;
    for (const auto& [q, p, flag] : ups)
      for (const auto& [d, d2] : it->second) out[{q, p, d, d2}] |= flag;
  }
  return out;
}

Dvpa random_dvpa(std::mt19937_64& rng, const RandomDvpaOptions& o) {
  auto draw = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  auto chance = [&](double p) { return static_cast<double>(rng() % 1000000) < p * 1000000.0; };
  std::vector<std::string> calls, returns, internals;
  for (std::size_t i = 0; i < o.calls; ++i) calls.push_back("c" + std::to_string(i));
  for (std::size_t i = 0; i < o.returns; ++i) returns.push_back("r" + std::to_string(i));
  for (std::size_t i = 0; i < o.internals; ++i) internals.push_back("i" + std::to_string(i));
  DvpaBuilder b(PartitionedAlphabet(calls, returns, internals));
  for (std::size_t q = 0; q < o.states; ++q) b.add_state("s" + std::to_string(q));
  for (std::size_t z = 0; z < o.stack; ++z) b.add_stack_symbol("Z" + std::to_string(z));
  b.set_initial(0);
  const auto n = static_cast<StateId>(o.states);
  for (StateId q = 0; q < n; ++q) {
    for (std::uint32_t c = 0; c < o.calls; ++c)
      if (o.stack > 0 && chance(o.density))
        b.set_call(q, c, static_cast<StateId>(draw(n)), static_cast<StackId>(draw(o.stack)));
    for (std::uint32_t i = 0; i < o.internals; ++i)
      if (chance(o.density)) b.set_internal(q, i, static_cast<StateId>(draw(n)));
    for (StackId z = 0; z < o.stack; ++z)
      for (std::uint32_t r = 0; r < o.returns; ++r)
        if (chance(o.density)) b.set_return(q, z, r, static_cast<StateId>(draw(n)));
  }
  AcceptanceSpec acc;
  acc.kind = o.kind;
  if (acc.is_buchi()) {
    for (StateId q = 0; q < n; ++q) acc.final_states.push_back(draw(2) == 0);
  } else {
    for (StateId q = 0; q < n; ++q) acc.priorities.push_back(static_cast<unsigned>(draw(o.max_priority + 1)));
  }
  return std::move(b).build(std::move(acc));
}

PriorityGraph random_graph(std::mt19937_64& rng, std::size_t max_vertices, unsigned max_priority) {
  PriorityGraph g;
  g.num_vertices = 1 + rng() % max_vertices;
  for (std::size_t v = 0; v < g.num_vertices; ++v) g.priority.push_back(static_cast<unsigned>(rng() % (max_priority + 1)));
  for (std::size_t a = 0; a < g.num_vertices; ++a)
    for (std::size_t b = 0; b < g.num_vertices; ++b)
      if (rng() % 100 < 35) g.edges.insert({a, b});
  return g;
}

bool labeling_exists(const PriorityGraph& graph, unsigned count) {
  if (count == 0) return graph.num_vertices == 0;
  const auto subsets = cyclic_subsets(graph);
  const std::size_t n = graph.num_vertices;
  std::vector<unsigned> want(subsets.size());
  for (std::size_t k = 0; k < subsets.size(); ++k) {
    unsigned m = 0;
    for (std::size_t v = 0; v < n; ++v)
      if (subsets[k] & (1U << v)) m = std::max(m, graph.priority[v]);
    want[k] = m % 2;
  }
  for (unsigned base = 0; base <= 1; ++base) {
    std::vector<unsigned> label(n, base);
    for (;;) {
      bool ok = true;
      for (std::size_t k = 0; k < subsets.size() && ok; ++k) {
        unsigned m = 0;
        for (std::size_t v = 0; v < n; ++v)
          if (subsets[k] & (1U << v)) m = std::max(m, label[v]);
        ok = m % 2 == want[k];
      }
      if (ok) return true;
      std::size_t v = 0;
      while (v < n && label[v] == base + count - 1) label[v++] = base;
      if (v == n) break;
      ++label[v];
    }
  }
  return false;
}

std::set<std::size_t> brute_recurring_steps(const Dvpa& dvpa, const LassoWord& lasso, std::size_t horizon,
                                            std::size_t from, std::size_t to) {
  Word word = lasso.prefix;
  while (word.size() < horizon) word.insert(word.end(), lasso.period.begin(), lasso.period.end());
  word.resize(horizon);
  const RunTrace t = run_word(dvpa, word);
  std::set<std::size_t> out;
  for (std::size_t i = from; i < to && i < t.length(); ++i)
    if (t.step(i)) out.insert(i);
  return out;
}

}  // namespace testing
