#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "stairvpa/dvpa.hpp"
#include "stairvpa/lasso.hpp"

namespace stairvpa {

/// live: no prefix of u·v·v has more returns than calls and net(v) >= 0.
/// any: symbols drawn uniformly.
enum class LassoPolicy { live, any };

std::string_view to_string(LassoPolicy policy);

/// Deterministic stream of lassos. |u| is drawn from [0, max_len] and |v|
/// from [1, max_len]. Live periods are balanced or call-heavy, one each
/// in expectation.
class LassoGenerator {
 public:
  explicit LassoGenerator(std::uint64_t seed) : rng_(seed) {}

  /// Live generation needs a call or internal symbol; throws
  /// std::invalid_argument otherwise.
  LassoWord next(const PartitionedAlphabet& alphabet, std::size_t max_len, LassoPolicy policy);

 private:
  std::size_t draw(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

  std::mt19937_64 rng_;
};

LassoWord random_lasso(const PartitionedAlphabet& alphabet, std::uint64_t seed, std::size_t max_len,
                       LassoPolicy policy);

}  // namespace stairvpa
