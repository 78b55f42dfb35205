#include "stairvpa/random.hpp"

#include <stdexcept>
#include <vector>

namespace stairvpa {

std::string_view to_string(LassoPolicy policy) { return policy == LassoPolicy::live ? "live" : "any"; }

LassoWord LassoGenerator::next(const PartitionedAlphabet& alphabet, std::size_t max_len, LassoPolicy policy) {
  if (max_len == 0) throw std::invalid_argument("max_len must be at least 1");
  const std::vector<Symbol> all = alphabet.symbols();
  std::vector<Symbol> calls, returns, internals;
  for (Symbol s : all) {
    if (s.kind == SymbolKind::call) calls.push_back(s);
    else if (s.kind == SymbolKind::ret) returns.push_back(s);
    else internals.push_back(s);
  }

  LassoWord out;
  const std::size_t u_len = draw(max_len + 1);
  const std::size_t v_len = 1 + draw(max_len);

  if (policy == LassoPolicy::any) {
    for (std::size_t i = 0; i < u_len; ++i) out.prefix.push_back(all[draw(all.size())]);
    for (std::size_t i = 0; i < v_len; ++i) out.period.push_back(all[draw(all.size())]);
    return out;
  }

  if (calls.empty() && internals.empty()) throw std::invalid_argument("live lassos need a call or internal symbol");

  auto pick = [&](bool allow_return, bool allow_call) {
    std::vector<Symbol> options(internals);
    if (allow_call) options.insert(options.end(), calls.begin(), calls.end());
    if (allow_return) options.insert(options.end(), returns.begin(), returns.end());
    return options[draw(options.size())];
  };

  std::size_t height = 0;
  for (std::size_t i = 0; i < u_len; ++i) {
    Symbol s = pick(height > 0, true);
    if (s.kind == SymbolKind::call) ++height;
    if (s.kind == SymbolKind::ret) --height;
    out.prefix.push_back(s);
  }

  // Heights are relative to the start of the period, which keeps every
  // prefix of u·v·v non-negative.
  const bool balanced = draw(2) == 0;
  std::size_t rel = 0;
  for (std::size_t i = 0; i < v_len; ++i) {
    const std::size_t left = v_len - i;
    Symbol s;
    if (balanced && !returns.empty()) {
      if (rel > 0 && rel >= left) {
        s = returns[draw(returns.size())];
      } else {
        const bool room = rel + 1 < left;  // a call must still be closable
        s = (internals.empty() && !room && rel == 0) ? calls[draw(calls.size())] : pick(rel > 0, room);
      }
    } else if (!calls.empty() && draw(2) == 0) {
      s = calls[draw(calls.size())];
    } else {
      s = pick(rel > 0, true);
    }
    if (s.kind == SymbolKind::call) ++rel;
    if (s.kind == SymbolKind::ret) --rel;
    out.period.push_back(s);
  }
  return out;
}

LassoWord random_lasso(const PartitionedAlphabet& alphabet, std::uint64_t seed, std::size_t max_len,
                       LassoPolicy policy) {
  return LassoGenerator(seed).next(alphabet, max_len, policy);
}

}  // namespace stairvpa
