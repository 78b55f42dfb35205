#include "stairvpa/run.hpp"

#include <algorithm>

#include "stairvpa/errors.hpp"

namespace stairvpa {

Configuration RunTrace::config(std::size_t i) const {
  Configuration c{states_.at(i), {}};
  for (std::size_t node = top_.at(i); node != 0; node = nodes_[node].second) c.stack.push_back(nodes_[node].first);
  std::reverse(c.stack.begin(), c.stack.end());
  return c;
}

std::vector<bool> step_flags(const std::vector<std::size_t>& heights) {
  std::vector<bool> out(heights.size(), false);
  std::size_t future_min = static_cast<std::size_t>(-1);
  for (std::size_t i = heights.size(); i-- > 0;) {
    future_min = std::min(future_min, heights[i]);
    out[i] = heights[i] <= future_min;
  }
  return out;
}

RunTrace run_word(const Dvpa& dvpa, const Configuration& start, const Word& word) {
  RunTrace t;
  t.consumed_ = word;
  t.nodes_.push_back({0, 0});
  std::size_t top = 0;
  for (StackId z : start.stack) {
    t.nodes_.push_back({z, top});
    top = t.nodes_.size() - 1;
  }
  StateId q = start.state;
  std::size_t h = start.stack.size();
  t.states_.push_back(q);
  t.heights_.push_back(h);
  t.top_.push_back(top);

  for (std::size_t i = 0; i < word.size(); ++i) {
    const Symbol s = word[i];
    std::optional<StateId> next;
    switch (s.kind) {
      case SymbolKind::call:
        if (auto c = dvpa.call(q, s.index)) {
          t.nodes_.push_back({c->push, top});
          top = t.nodes_.size() - 1;
          ++h;
          next = c->state;
        }
        break;
      case SymbolKind::ret:
        if (h > 0) {
          if (auto p = dvpa.ret(q, t.nodes_[top].first, s.index)) {
            top = t.nodes_[top].second;
            --h;
            next = *p;
          }
        }
        break;
      case SymbolKind::internal:
        next = dvpa.internal(q, s.index);
        break;
    }
    if (!next) {
      t.death_ = i;
      break;
    }
    q = *next;
    t.states_.push_back(q);
    t.heights_.push_back(h);
    t.top_.push_back(top);
  }

  t.step_flags_ = step_flags(t.heights_);
  for (std::size_t i = 0; i < t.states_.size(); ++i)
    if (t.step_flags_[i] && dvpa.acceptance().accepting(t.states_[i])) ++t.f_on_step_count_;
  return t;
}

WordClass classify_word(const Word& word) {
  std::size_t surplus = 0;
  bool returned_to_zero_early = false;
  for (std::size_t i = 0; i < word.size(); ++i) {
    switch (word[i].kind) {
      case SymbolKind::call:
        ++surplus;
        break;
      case SymbolKind::ret:
        if (surplus == 0) return word_class::Illegal{i};
        --surplus;
        break;
      case SymbolKind::internal:
        break;
    }
    if (surplus == 0 && i + 1 < word.size()) returned_to_zero_early = true;
  }
  if (surplus > 0) return word_class::Pending{surplus};
  if (!word.empty() && word.front().kind == SymbolKind::call && word.back().kind == SymbolKind::ret &&
      !returned_to_zero_early)
    return word_class::MinimallyWellMatched{};
  return word_class::WellMatched{};
}

WordClass classify_word(const PartitionedAlphabet& alphabet, const Word& word) {
  for (const Symbol& s : word)
    if (s.index >= alphabet.count(s.kind)) throw SemanticError("symbol outside the alphabet");
  return classify_word(word);
}

bool is_well_matched(const Word& word) {
  auto c = classify_word(word);
  return std::holds_alternative<word_class::WellMatched>(c) ||
         std::holds_alternative<word_class::MinimallyWellMatched>(c);
}

bool is_minimally_well_matched(const Word& word) {
  return std::holds_alternative<word_class::MinimallyWellMatched>(classify_word(word));
}

}  // namespace stairvpa
