#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "stairvpa/dvpa.hpp"
#include "stairvpa/lasso.hpp"

namespace stairvpa {

struct DiffOptions {
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  std::size_t max_len = 12;
  bool exhaustive = true;  // add all lassos with |u| <= 2, |v| <= 4 on alphabets of <= 4 symbols
};

struct DiffMismatch {
  LassoWord lasso;  // over the first automaton's alphabet
  LassoVerdict a;
  LassoVerdict b;
};

struct DiffReport {
  std::size_t samples = 0;     // random lassos evaluated
  std::size_t exhaustive = 0;  // lassos of the fixed sub-corpus evaluated
  std::uint64_t seed = 0;
  std::vector<DiffMismatch> mismatches;  // sorted by length, then lexicographically
  std::optional<LassoWord> first_mismatch_shrunk;
};

/// Lassos with |u| <= max_prefix and 1 <= |v| <= max_period, in length order.
std::vector<LassoWord> exhaustive_lassos(const PartitionedAlphabet& alphabet, std::size_t max_prefix,
                                         std::size_t max_period);

/// Rewrites a lasso over `from` into the symbols of the same names in `to`.
LassoWord translate(const LassoWord& lasso, const PartitionedAlphabet& from, const PartitionedAlphabet& to);

/// Compares two automata on a seeded corpus. Random lassos alternate
/// between the live and any policies. Throws SemanticError when the
/// alphabets differ.
DiffReport diff(const Dvpa& a, const Dvpa& b, const DiffOptions& options = {});

}  // namespace stairvpa
