#include "stairvpa/reducer.hpp"

#include <algorithm>
#include <cctype>

#include "stairvpa/errors.hpp"
#include "stairvpa/run.hpp"
#include "stairvpa/summaries.hpp"

namespace stairvpa {

namespace {

void append(Word& out, const Word& w) { out.insert(out.end(), w.begin(), w.end()); }

}  // namespace

std::vector<SuMove> parse_su_input(std::string_view text) {
  std::vector<SuMove> out;
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) continue;
    if (ch == 'c') out.push_back(SuMove::call);
    else if (ch == 'r') out.push_back(SuMove::ret);
    else throw SyntaxError(0, std::string("reducer input may only contain 'c' and 'r', got '") + ch + "'");
  }
  return out;
}

Word SuReducer::on_call(ReducerState& state) const {
  Word out = witness_.w;
  append(out, witness_.u);
  append(out, witness_.v);
  state.eta.insert(0, "01");
  ++state.open_calls;
  ++state.zero_count;
  state.emitted += out.size();
  return out;
}

Word SuReducer::on_return(ReducerState& state) const {
  const std::size_t zero = state.eta.find('0');
  if (zero == std::string::npos) throw SemanticError("reducer input has more returns than calls");
  Word out = witness_.w;
  append(out, witness_.x);
  append(out, witness_.y);
  for (std::size_t i = 0; i < zero; ++i) append(out, witness_.y);
  append(out, witness_.z);
  state.eta.erase(0, zero + 1);
  --state.open_calls;
  --state.zero_count;
  state.emitted += out.size();
  return out;
}

SuReducer su_reducer(const Dvpa& dvpa, const PatternWitness& witness) {
  if (auto failures = replay_pattern(dvpa, witness); !failures.empty())
    throw SemanticError("pattern witness does not replay: " + failures.front());
  SuReducer r;
  r.witness_ = witness;
  auto access = reachable(dvpa).access_word(witness.q1);
  if (!access) throw SemanticError("state " + dvpa.state_name(witness.q1) + " is not reachable");
  r.access_ = std::move(*access);
  r.k_ = run_word(dvpa, Configuration{witness.q, {}}, witness.u).f_on_step_count();
  return r;
}

Transduction transduce(const Dvpa& dvpa, const SuReducer& reducer, const std::vector<SuMove>& input) {
  Transduction out;
  out.access = reducer.access();
  ReducerState state;
  out.trace.push_back(state);
  std::vector<std::size_t> boundaries{0};
  for (SuMove m : input) {
    Word emitted = m == SuMove::call ? reducer.on_call(state) : reducer.on_return(state);
    append(out.output, emitted);
    out.moves.push_back(std::move(emitted));
    out.trace.push_back(state);
    boundaries.push_back(out.output.size());
  }

  // Steps of every prefix at once: a position stays a step of the prefix
  // ending at e until some later position up to e is lower.
  const RunTrace run = run_word(dvpa, Configuration{reducer.witness().q1, {}}, out.output);
  if (run.death()) throw InternalError("reducer emission halts at position " + std::to_string(*run.death()));
  const auto& finals = dvpa.acceptance();
  std::vector<std::size_t> steps;
  std::size_t accepting = 0;
  std::size_t next = 0;
  for (std::size_t pos = 0; pos < run.length(); ++pos) {
    while (!steps.empty() && run.height(steps.back()) > run.height(pos)) {
      if (finals.accepting(run.state(steps.back()))) --accepting;
      steps.pop_back();
    }
    steps.push_back(pos);
    if (finals.accepting(run.state(pos))) ++accepting;
    while (next < boundaries.size() && boundaries[next] == pos) {
      out.f_on_step.push_back(accepting);
      ++next;
    }
  }
  return out;
}

}  // namespace stairvpa
