#include "stairvpa/dvpa.hpp"

#include <algorithm>
#include <sstream>

#include "stairvpa/errors.hpp"

namespace stairvpa {

bool is_valid_token(std::string_view name) {
  if (name.empty()) return false;
  return std::none_of(name.begin(), name.end(), [](char ch) {
    return ch == ';' || ch == '#' || ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r' || ch == '\v' ||
           ch == '\f';
  });
}

PartitionedAlphabet::PartitionedAlphabet(std::vector<std::string> calls, std::vector<std::string> returns,
                                         std::vector<std::string> internals)
    : calls_(std::move(calls)), returns_(std::move(returns)), internals_(std::move(internals)) {
  auto intern = [this](const std::vector<std::string>& names, SymbolKind kind) {
    for (std::uint32_t i = 0; i < names.size(); ++i) {
      if (!is_valid_token(names[i])) throw SemanticError("invalid symbol name '" + names[i] + "'");
      if (!lookup_.emplace(names[i], Symbol{kind, i}).second)
        throw SemanticError("symbol '" + names[i] + "' declared twice");
    }
  };
  intern(calls_, SymbolKind::call);
  intern(returns_, SymbolKind::ret);
  intern(internals_, SymbolKind::internal);
  if (lookup_.empty()) throw SemanticError("empty alphabet");
}

std::size_t PartitionedAlphabet::count(SymbolKind kind) const {
  switch (kind) {
    case SymbolKind::call:
      return calls_.size();
    case SymbolKind::ret:
      return returns_.size();
    case SymbolKind::internal:
      return internals_.size();
  }
  return 0;
}

std::optional<Symbol> PartitionedAlphabet::find(std::string_view name) const {
  auto it = lookup_.find(std::string(name));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

Symbol PartitionedAlphabet::at(std::string_view name) const {
  if (auto s = find(name)) return *s;
  throw SemanticError("unknown symbol '" + std::string(name) + "'");
}

const std::string& PartitionedAlphabet::name(Symbol s) const {
  switch (s.kind) {
    case SymbolKind::call:
      return calls_.at(s.index);
    case SymbolKind::ret:
      return returns_.at(s.index);
    case SymbolKind::internal:
      break;
  }
  return internals_.at(s.index);
}

std::vector<Symbol> PartitionedAlphabet::symbols() const {
  std::vector<Symbol> out;
  out.reserve(size());
  for (std::uint32_t i = 0; i < calls_.size(); ++i) out.push_back({SymbolKind::call, i});
  for (std::uint32_t i = 0; i < returns_.size(); ++i) out.push_back({SymbolKind::ret, i});
  for (std::uint32_t i = 0; i < internals_.size(); ++i) out.push_back({SymbolKind::internal, i});
  return out;
}

bool PartitionedAlphabet::same_symbols(const PartitionedAlphabet& other) const {
  auto sorted = [](std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  return sorted(calls_) == sorted(other.calls_) && sorted(returns_) == sorted(other.returns_) &&
         sorted(internals_) == sorted(other.internals_);
}

Word PartitionedAlphabet::parse_word(std::string_view text) const {
  Word out;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) out.push_back(at(token));
  return out;
}

std::string PartitionedAlphabet::format_word(const Word& w) const {
  std::string out;
  for (const Symbol& s : w) {
    if (!out.empty()) out += ' ';
    out += name(s);
  }
  return out;
}

std::string_view to_string(AcceptanceKind kind) {
  switch (kind) {
    case AcceptanceKind::buchi:
      return "buchi";
    case AcceptanceKind::parity:
      return "parity";
    case AcceptanceKind::stair_buchi:
      return "stair-buchi";
    case AcceptanceKind::stair_parity:
      return "stair-parity";
  }
  return "?";
}

std::optional<AcceptanceKind> parse_acceptance_kind(std::string_view text) {
  if (text == "buchi") return AcceptanceKind::buchi;
  if (text == "parity") return AcceptanceKind::parity;
  if (text == "stair-buchi") return AcceptanceKind::stair_buchi;
  if (text == "stair-parity") return AcceptanceKind::stair_parity;
  return std::nullopt;
}

unsigned AcceptanceSpec::priority(StateId q) const {
  if (is_buchi()) return final_states.at(q) ? 2U : 1U;
  return priorities.at(q);
}

bool AcceptanceSpec::accepting(StateId q) const {
  if (is_buchi()) return final_states.at(q);
  return priorities.at(q) % 2 == 0;
}

std::optional<StateId> Dvpa::find_state(std::string_view name) const {
  auto it = state_lookup_.find(std::string(name));
  if (it == state_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<StackId> Dvpa::find_stack_symbol(std::string_view name) const {
  auto it = stack_lookup_.find(std::string(name));
  if (it == stack_lookup_.end()) return std::nullopt;
  return it->second;
}

std::size_t Dvpa::num_call_transitions() const {
  return static_cast<std::size_t>(
      std::count_if(call_.begin(), call_.end(), [](const CallTarget& t) { return t.state != kNone; }));
}

std::size_t Dvpa::num_internal_transitions() const {
  return static_cast<std::size_t>(std::count_if(internal_.begin(), internal_.end(), [](StateId t) { return t != kNone; }));
}

std::vector<Dvpa::ReturnEntry> Dvpa::return_transitions() const {
  std::vector<ReturnEntry> out;
  out.reserve(return_.size());
  const std::uint64_t nr = alphabet_.returns().size() + 1;
  const std::uint64_t nz = stack_names_.size() + 1;
  for (const auto& [key, to] : return_) {
    auto r = static_cast<std::uint32_t>(key % nr);
    auto z = static_cast<StackId>((key / nr) % nz);
    auto q = static_cast<StateId>(key / nr / nz);
    out.push_back({q, z, r, to});
  }
  std::sort(out.begin(), out.end(), [](const ReturnEntry& a, const ReturnEntry& b) {
    return std::tie(a.from, a.pop, a.symbol) < std::tie(b.from, b.pop, b.symbol);
  });
  return out;
}

namespace {

void check_acceptance(const AcceptanceSpec& acc, std::size_t num_states) {
  if (acc.is_buchi()) {
    if (!acc.priorities.empty()) throw SemanticError(std::string(to_string(acc.kind)) + " acceptance takes final states, not priorities");
    if (acc.final_states.size() != num_states) throw SemanticError("final-state set does not match the state set");
  } else {
    if (!acc.final_states.empty()) throw SemanticError(std::string(to_string(acc.kind)) + " acceptance takes priorities, not final states");
    if (acc.priorities.size() != num_states) throw SemanticError("priorities must be given for every state");
  }
}

}  // namespace

Dvpa Dvpa::with_acceptance(AcceptanceSpec acceptance) const {
  check_acceptance(acceptance, num_states());
  Dvpa out = *this;
  out.acceptance_ = std::move(acceptance);
  return out;
}

DvpaBuilder::DvpaBuilder(PartitionedAlphabet alphabet) : alphabet_(std::move(alphabet)) {}

StateId DvpaBuilder::add_state(std::string name) {
  if (!is_valid_token(name)) throw SemanticError("invalid state name '" + name + "'");
  auto id = static_cast<StateId>(states_.size());
  if (!state_lookup_.emplace(name, id).second) throw SemanticError("state '" + name + "' declared twice");
  states_.push_back(std::move(name));
  return id;
}

StackId DvpaBuilder::add_stack_symbol(std::string name) {
  if (!is_valid_token(name)) throw SemanticError("invalid stack symbol name '" + name + "'");
  auto id = static_cast<StackId>(stack_.size());
  if (!stack_lookup_.emplace(name, id).second) throw SemanticError("stack symbol '" + name + "' declared twice");
  stack_.push_back(std::move(name));
  return id;
}

void DvpaBuilder::set_call(StateId q, std::uint32_t c, StateId to, StackId push) {
  if (!calls_.emplace(std::pair{q, c}, CallTarget{to, push}).second)
    throw SemanticError("duplicate call transition for (" + states_.at(q) + ", " + alphabet_.calls().at(c) + ")");
}

void DvpaBuilder::set_return(StateId q, StackId pop, std::uint32_t r, StateId to) {
  if (!returns_.emplace(std::tuple{q, pop, r}, to).second)
    throw SemanticError("duplicate return transition for (" + states_.at(q) + ", " + stack_.at(pop) + ", " +
                        alphabet_.returns().at(r) + ")");
}

void DvpaBuilder::set_internal(StateId q, std::uint32_t i, StateId to) {
  if (!internals_.emplace(std::pair{q, i}, to).second)
    throw SemanticError("duplicate internal transition for (" + states_.at(q) + ", " + alphabet_.internals().at(i) +
                        ")");
}

Dvpa DvpaBuilder::build(AcceptanceSpec acceptance) && {
  if (states_.empty()) throw SemanticError("empty state set");
  if (!initial_) throw SemanticError("no initial state");
  check_acceptance(acceptance, states_.size());

  Dvpa out;
  out.alphabet_ = std::move(alphabet_);
  out.state_names_ = std::move(states_);
  out.stack_names_ = std::move(stack_);
  out.state_lookup_ = std::move(state_lookup_);
  out.stack_lookup_ = std::move(stack_lookup_);
  out.initial_ = *initial_;
  out.acceptance_ = std::move(acceptance);

  const std::size_t n = out.state_names_.size();
  out.call_.assign(n * out.alphabet_.calls().size(), CallTarget{Dvpa::kNone, 0});
  for (const auto& [key, target] : calls_) out.call_[key.first * out.alphabet_.calls().size() + key.second] = target;
  out.internal_.assign(n * out.alphabet_.internals().size(), Dvpa::kNone);
  for (const auto& [key, target] : internals_)
    out.internal_[key.first * out.alphabet_.internals().size() + key.second] = target;
  out.return_.reserve(returns_.size());
  for (const auto& [key, target] : returns_) {
    const auto& [q, z, r] = key;
    out.return_.emplace(out.return_key(q, z, r), target);
  }
  return out;
}

namespace {

std::string plural(std::size_t n, const std::string& noun) { return std::to_string(n) + " " + noun + (n == 1 ? "" : "s"); }

}  // namespace

Validated validate(const DvpaDescription& d) {
  if (d.states.empty()) throw SemanticError("empty state set");
  PartitionedAlphabet alphabet(d.calls, d.returns, d.internals);
  DvpaBuilder builder(alphabet);
  for (const auto& s : d.states) builder.add_state(s);
  for (const auto& z : d.stack) builder.add_stack_symbol(z);

  // Local name lookups keep error messages tied to source lines.
  std::unordered_map<std::string, StateId> states;
  for (StateId i = 0; i < d.states.size(); ++i) states.emplace(d.states[i], i);
  std::unordered_map<std::string, StackId> stack;
  for (StackId i = 0; i < d.stack.size(); ++i) stack.emplace(d.stack[i], i);

  auto where = [](std::size_t line) { return line ? "line " + std::to_string(line) + ": " : std::string(); };
  auto state = [&](const std::string& name, std::size_t line) {
    auto it = states.find(name);
    if (it == states.end()) throw SemanticError(where(line) + "undeclared state '" + name + "'");
    return it->second;
  };
  auto stack_symbol = [&](const std::string& name, std::size_t line) {
    auto it = stack.find(name);
    if (it == stack.end()) throw SemanticError(where(line) + "undeclared stack symbol '" + name + "'");
    return it->second;
  };
  auto symbol = [&](const std::string& name, SymbolKind kind, std::size_t line) {
    auto s = alphabet.find(name);
    static constexpr const char* kKindNames[] = {"call", "return", "internal"};
    if (!s) throw SemanticError(where(line) + "undeclared symbol '" + name + "'");
    if (s->kind != kind)
      throw SemanticError(where(line) + "symbol '" + name + "' is not a " + kKindNames[static_cast<int>(kind)] + " symbol");
    return s->index;
  };

  builder.set_initial(state(d.initial, 0));
  for (const auto& t : d.call_lines) {
    try {
      builder.set_call(state(t.from, t.line), symbol(t.symbol, SymbolKind::call, t.line), state(t.to, t.line),
                       stack_symbol(t.push, t.line));
    } catch (const SemanticError& e) {
      if (std::string_view(e.what()).rfind("line ", 0) == 0) throw;
      throw SemanticError(where(t.line) + e.what());
    }
  }
  for (const auto& t : d.return_lines) {
    try {
      builder.set_return(state(t.from, t.line), stack_symbol(t.pop, t.line), symbol(t.symbol, SymbolKind::ret, t.line),
                         state(t.to, t.line));
    } catch (const SemanticError& e) {
      if (std::string_view(e.what()).rfind("line ", 0) == 0) throw;
      throw SemanticError(where(t.line) + e.what());
    }
  }
  for (const auto& t : d.internal_lines) {
    try {
      builder.set_internal(state(t.from, t.line), symbol(t.symbol, SymbolKind::internal, t.line), state(t.to, t.line));
    } catch (const SemanticError& e) {
      if (std::string_view(e.what()).rfind("line ", 0) == 0) throw;
      throw SemanticError(where(t.line) + e.what());
    }
  }

  AcceptanceSpec acc;
  acc.kind = d.kind;
  if (acc.is_buchi()) {
    if (d.has_priorities) throw SemanticError(std::string(to_string(d.kind)) + " acceptance takes 'final', not 'priorities'");
    acc.final_states.assign(d.states.size(), false);
    for (const auto& f : d.final_states) acc.final_states[state(f, 0)] = true;
  } else {
    if (d.has_final) throw SemanticError(std::string(to_string(d.kind)) + " acceptance takes 'priorities', not 'final'");
    std::vector<std::optional<unsigned>> prio(d.states.size());
    for (const auto& [name, p] : d.priorities) {
      auto q = state(name, 0);
      if (prio[q]) throw SemanticError("priority of state '" + name + "' given twice");
      prio[q] = p;
    }
    for (StateId q = 0; q < prio.size(); ++q) {
      if (!prio[q]) throw SemanticError("missing priority for state '" + d.states[q] + "'");
      acc.priorities.push_back(*prio[q]);
    }
  }

  Dvpa dvpa = std::move(builder).build(std::move(acc));

  std::vector<std::string> warnings;
  const std::size_t n = dvpa.num_states();
  const std::size_t missing_calls = n * alphabet.calls().size() - dvpa.num_call_transitions();
  const std::size_t missing_returns =
      n * dvpa.num_stack_symbols() * alphabet.returns().size() - dvpa.num_return_transitions();
  const std::size_t missing_internals = n * alphabet.internals().size() - dvpa.num_internal_transitions();
  if (missing_calls) warnings.push_back("partial: " + plural(missing_calls, "missing call transition"));
  if (missing_returns) warnings.push_back("partial: " + plural(missing_returns, "missing return transition"));
  if (missing_internals) warnings.push_back("partial: " + plural(missing_internals, "missing internal transition"));
  return {std::move(dvpa), std::move(warnings)};
}

}  // namespace stairvpa
