#include "stairvpa/diff.hpp"

#include <algorithm>
#include <set>

#include "stairvpa/errors.hpp"
#include "stairvpa/random.hpp"

namespace stairvpa {

namespace {

std::vector<Word> words_up_to(const std::vector<Symbol>& symbols, std::size_t min_len, std::size_t max_len) {
  std::vector<Word> out;
  std::vector<Word> layer{{}};
  for (std::size_t len = 0; len <= max_len; ++len) {
    if (len >= min_len) out.insert(out.end(), layer.begin(), layer.end());
    if (len == max_len) break;
    std::vector<Word> next;
    for (const Word& w : layer)
      for (Symbol s : symbols) {
        next.push_back(w);
        next.back().push_back(s);
      }
    layer = std::move(next);
  }
  return out;
}

bool shorter(const LassoWord& x, const LassoWord& y) {
  const std::size_t lx = x.prefix.size() + x.period.size();
  const std::size_t ly = y.prefix.size() + y.period.size();
  if (lx != ly) return lx < ly;
  return x < y;
}

}  // namespace

std::vector<LassoWord> exhaustive_lassos(const PartitionedAlphabet& alphabet, std::size_t max_prefix,
                                         std::size_t max_period) {
  const auto symbols = alphabet.symbols();
  const auto prefixes = words_up_to(symbols, 0, max_prefix);
  const auto periods = words_up_to(symbols, 1, max_period);
  std::vector<LassoWord> out;
  out.reserve(prefixes.size() * periods.size());
  for (const Word& u : prefixes)
    for (const Word& v : periods) out.push_back({u, v});
  std::stable_sort(out.begin(), out.end(), shorter);
  return out;
}

LassoWord translate(const LassoWord& lasso, const PartitionedAlphabet& from, const PartitionedAlphabet& to) {
  auto map = [&](const Word& w) {
    Word out;
    out.reserve(w.size());
    for (Symbol s : w) out.push_back(to.at(from.name(s)));
    return out;
  };
  return {map(lasso.prefix), map(lasso.period)};
}

DiffReport diff(const Dvpa& a, const Dvpa& b, const DiffOptions& options) {
  if (!a.alphabet().same_symbols(b.alphabet())) throw SemanticError("the two automata have different alphabets");
  const PartitionedAlphabet& alphabet = a.alphabet();

  DiffReport report;
  report.seed = options.seed;
  std::set<LassoWord> seen;
  std::vector<DiffMismatch> found;

  auto check = [&](const LassoWord& lasso) {
    if (!seen.insert(lasso).second) return;
    LassoVerdict va = accepts(a, lasso);
    LassoVerdict vb = accepts(b, translate(lasso, alphabet, b.alphabet()));
    if (va.accepted != vb.accepted) found.push_back({lasso, std::move(va), std::move(vb)});
  };

  LassoGenerator gen(options.seed);
  for (std::size_t i = 0; i < options.samples; ++i) {
    const LassoPolicy policy = i % 2 == 0 ? LassoPolicy::live : LassoPolicy::any;
    check(gen.next(alphabet, options.max_len, policy));
    ++report.samples;
  }
  if (options.exhaustive && alphabet.size() <= 4) {
    const auto corpus = exhaustive_lassos(alphabet, 2, 4);
    report.exhaustive = corpus.size();
    for (const LassoWord& lasso : corpus) check(lasso);
  }

  std::sort(found.begin(), found.end(), [](const DiffMismatch& x, const DiffMismatch& y) { return shorter(x.lasso, y.lasso); });
  report.mismatches = std::move(found);

  if (!report.mismatches.empty()) {
    auto disagree = [&](const LassoWord& l) {
      return accepts(a, l).accepted != accepts(b, translate(l, alphabet, b.alphabet())).accepted;
    };
    LassoWord cur = report.mismatches.front().lasso;
    for (bool progress = true; progress;) {
      progress = false;
      for (Word* part : {&cur.prefix, &cur.period}) {
        for (std::size_t i = 0; i < part->size();) {
          if (part == &cur.period && part->size() == 1) break;
          LassoWord trial = cur;
          Word& target = part == &cur.prefix ? trial.prefix : trial.period;
          target.erase(target.begin() + static_cast<long>(i));
          if (disagree(trial)) {
            cur = std::move(trial);
            progress = true;
          } else {
            ++i;
          }
        }
      }
    }
    report.first_mismatch_shrunk = std::move(cur);
  }
  return report;
}

}  // namespace stairvpa
