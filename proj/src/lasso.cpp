#include "stairvpa/lasso.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "stairvpa/errors.hpp"

namespace stairvpa {

LassoWord parse_lasso(const PartitionedAlphabet& alphabet, std::string_view text) {
  auto semi = text.find(';');
  if (semi == std::string_view::npos) throw SemanticError("lasso must have the form 'u ; v'");
  if (text.find(';', semi + 1) != std::string_view::npos) throw SemanticError("lasso contains more than one ';'");
  LassoWord out{alphabet.parse_word(text.substr(0, semi)), alphabet.parse_word(text.substr(semi + 1))};
  if (out.period.empty()) throw SemanticError("lasso period must be non-empty");
  return out;
}

std::string format_lasso(const PartitionedAlphabet& alphabet, const LassoWord& lasso) {
  std::string u = alphabet.format_word(lasso.prefix);
  return (u.empty() ? "" : u + " ") + "; " + alphabet.format_word(lasso.period);
}

std::string_view to_string(VerdictReason reason) { return reason == VerdictReason::cycle ? "cycle" : "dead-run"; }

namespace {

long delta(Symbol s) {
  switch (s.kind) {
    case SymbolKind::call:
      return 1;
    case SymbolKind::ret:
      return -1;
    case SymbolKind::internal:
      break;
  }
  return 0;
}

void check_symbols(const PartitionedAlphabet& alphabet, const LassoWord& lasso) {
  for (const Word* w : {&lasso.prefix, &lasso.period})
    for (const Symbol& s : *w)
      if (s.index >= alphabet.count(s.kind)) throw SemanticError("lasso symbol outside the alphabet");
  if (lasso.period.empty()) throw SemanticError("lasso period must be non-empty");
}

struct Simulation {
  std::vector<StateId> states;
  std::vector<std::size_t> heights;
  std::optional<std::size_t> death;
  std::size_t b1 = 0;
  std::size_t b2 = 0;
};

Simulation simulate(const Dvpa& dvpa, const LassoWord& lasso, long net) {
  Simulation sim;
  std::vector<StackId> stack;
  StateId q = dvpa.initial();
  sim.states.push_back(q);
  sim.heights.push_back(0);

  auto feed = [&](Symbol s) {
    std::optional<StateId> next;
    switch (s.kind) {
      case SymbolKind::call:
        if (auto c = dvpa.call(q, s.index)) {
          stack.push_back(c->push);
          next = c->state;
        }
        break;
      case SymbolKind::ret:
        if (!stack.empty()) {
          if (auto p = dvpa.ret(q, stack.back(), s.index)) {
            stack.pop_back();
            next = *p;
          }
        }
        break;
      case SymbolKind::internal:
        next = dvpa.internal(q, s.index);
        break;
    }
    if (!next) {
      sim.death = sim.states.size() - 1;
      return false;
    }
    q = *next;
    sim.states.push_back(q);
    sim.heights.push_back(stack.size());
    return true;
  };

  for (Symbol s : lasso.prefix)
    if (!feed(s)) return sim;

  const std::size_t width = std::max<std::size_t>(1, lasso.period.size());
  if (net < 0) {
    // Each period loses at least one level, so the run dies within
    // height + 1 periods.
    const std::size_t limit = stack.size() + 2;
    for (std::size_t b = 0; b < limit; ++b)
      for (Symbol s : lasso.period)
        if (!feed(s)) return sim;
    throw InternalError("draining lasso did not die");
  }

  // Pigeonhole bound on distinct boundary abstractions, saturated.
  const double bound_estimate = static_cast<double>(dvpa.num_states()) *
                                    std::pow(static_cast<double>(dvpa.num_stack_symbols() + 1), static_cast<double>(width)) *
                                    2.0 +
                                1.0;
  const std::size_t bound = bound_estimate > 1e9 ? static_cast<std::size_t>(1e9) : static_cast<std::size_t>(bound_estimate);

  std::map<std::vector<std::uint32_t>, std::size_t> seen;
  for (std::size_t b = 0;; ++b) {
    if (b > bound) throw InternalError("boundary abstraction failed to repeat within the pigeonhole bound");
    std::vector<std::uint32_t> key;
    key.reserve(width + 1);
    key.push_back(q);
    const std::size_t keep = std::min(width, stack.size());
    key.insert(key.end(), stack.end() - static_cast<long>(keep), stack.end());
    auto [it, fresh] = seen.emplace(std::move(key), b);
    if (!fresh) {
      sim.b1 = it->second;
      sim.b2 = b;
      return sim;
    }
    for (Symbol s : lasso.period)
      if (!feed(s)) return sim;
  }
}

}  // namespace

LassoProfile profile(const PartitionedAlphabet& alphabet, const LassoWord& lasso) {
  check_symbols(alphabet, lasso);
  LassoProfile p;
  long h = 0;
  long peak = 0;
  for (Symbol s : lasso.period) {
    h += delta(s);
    peak = std::max(peak, h);
    p.max_dip = std::max<std::size_t>(p.max_dip, static_cast<std::size_t>(peak - h));
  }
  p.net = h;

  long surplus = 0;
  std::size_t pos = 0;
  for (const Word* w : {&lasso.prefix, &lasso.period, &lasso.period}) {
    for (Symbol s : *w) {
      ++pos;
      surplus += delta(s);
      if (surplus < 0) {
        p.illegal_prefix = pos;
        return p;
      }
    }
  }
  return p;
}

namespace {

LassoBlock make_block(const Simulation& sim, const LassoWord& lasso, long net) {
  LassoBlock block;
  const std::size_t period = lasso.period.size();
  block.block_begin = lasso.prefix.size() + sim.b1 * period;
  block.block_end = lasso.prefix.size() + sim.b2 * period;
  block.shift = net * static_cast<long>(sim.b2 - sim.b1);
  block.heights.assign(sim.heights.begin() + static_cast<long>(block.block_begin),
                       sim.heights.begin() + static_cast<long>(block.block_end));
  block.states.assign(sim.states.begin() + static_cast<long>(block.block_begin),
                      sim.states.begin() + static_cast<long>(block.block_end));
  block.min_height = *std::min_element(block.heights.begin(), block.heights.end());

  // Heights beyond the block repeat shifted by `shift`, so the minimum over
  // everything after the block is min_height + shift.
  const std::size_t later_min = block.min_height + static_cast<std::size_t>(std::max(0L, block.shift));
  block.recurring_step.assign(block.heights.size(), false);
  std::size_t suffix_min = static_cast<std::size_t>(-1);
  for (std::size_t i = block.heights.size(); i-- > 0;) {
    suffix_min = std::min(suffix_min, block.heights[i]);
    block.recurring_step[i] = block.heights[i] <= suffix_min && block.heights[i] <= later_min;
  }
  return block;
}

}  // namespace

std::optional<LassoBlock> lasso_block(const Dvpa& dvpa, const LassoWord& lasso) {
  const LassoProfile prof = profile(dvpa.alphabet(), lasso);
  Simulation sim = simulate(dvpa, lasso, prof.net);
  if (sim.death) return std::nullopt;
  return make_block(sim, lasso, prof.net);
}

LassoVerdict accepts(const Dvpa& dvpa, const LassoWord& lasso) {
  const LassoProfile prof = profile(dvpa.alphabet(), lasso);
  Simulation sim = simulate(dvpa, lasso, prof.net);
  LassoVerdict v;
  if (sim.death) {
    v.accepted = false;
    v.reason = VerdictReason::dead_run;
    v.death_pos = sim.death;
    return v;
  }

  const LassoBlock block = make_block(sim, lasso, prof.net);
  const AcceptanceSpec& acc = dvpa.acceptance();
  for (std::size_t i = 0; i < block.states.size(); ++i)
    if (!acc.is_stair() || block.recurring_step[i]) v.recurring_priorities.insert(acc.priority(block.states[i]));

  v.reason = VerdictReason::cycle;
  v.boundary_pair = std::pair{sim.b1, sim.b2};
  v.accepted = !v.recurring_priorities.empty() && *v.recurring_priorities.rbegin() % 2 == 0;
  return v;
}

}  // namespace stairvpa
