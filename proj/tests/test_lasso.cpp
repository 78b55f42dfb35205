#include <doctest.h>

#include <random>

#include "stairvpa/errors.hpp"
#include "stairvpa/lasso.hpp"
#include "stairvpa/random.hpp"
#include "stairvpa/run.hpp"
#include "support.hpp"

using namespace stairvpa;
using testing::fixture;
using testing::parse;

namespace {

Dvpa with_kind(const Dvpa& d, AcceptanceKind kind) {
  AcceptanceSpec acc = d.acceptance();
  acc.kind = kind;
  return d.with_acceptance(acc);
}

Dvpa as_parity(const Dvpa& d, AcceptanceKind kind) {
  AcceptanceSpec acc;
  acc.kind = kind;
  for (StateId q = 0; q < d.num_states(); ++q) acc.priorities.push_back(d.acceptance().priority(q));
  return d.with_acceptance(acc);
}

}  // namespace

TEST_SUITE("profile") {
  TEST_CASE("examples") {
    PartitionedAlphabet a({"c"}, {"r"}, {"i"});
    auto p1 = profile(a, parse_lasso(a, "; c"));
    CHECK(p1.net == 1);
    CHECK(p1.max_dip == 0);
    auto p2 = profile(a, parse_lasso(a, "; c r"));
    CHECK(p2.net == 0);
    CHECK(p2.max_dip == 1);
    auto p3 = profile(a, parse_lasso(a, "r ; c"));
    REQUIRE(p3.illegal_prefix);
    CHECK(*p3.illegal_prefix == 1);
    auto p4 = profile(a, parse_lasso(a, "c ; r r c"));
    REQUIRE(p4.illegal_prefix);
    CHECK(*p4.illegal_prefix == 3);
    CHECK_FALSE(profile(a, parse_lasso(a, "c ; i r c")).illegal_prefix);
  }

  TEST_CASE("max_dip never exceeds the period length") {
    PartitionedAlphabet a({"c"}, {"r"}, {"i"});
    LassoGenerator gen(3);
    for (int n = 0; n < 500; ++n) {
      const LassoWord l = gen.next(a, 10, LassoPolicy::any);
      CHECK(profile(a, l).max_dip <= l.period.size());
    }
  }

  TEST_CASE("lasso syntax") {
    PartitionedAlphabet a({"c"}, {"r"}, {"i"});
    CHECK_THROWS_AS(parse_lasso(a, "c r"), SemanticError);
    CHECK_THROWS_AS(parse_lasso(a, "c ;"), SemanticError);
    CHECK_THROWS_AS(parse_lasso(a, "c ; r ; r"), SemanticError);
    CHECK(format_lasso(a, parse_lasso(a, ";c")) == "; c");
    CHECK(format_lasso(a, parse_lasso(a, " c i ; c r ")) == "c i ; c r");
  }
}

TEST_SUITE("accepts") {
  TEST_CASE("lsu examples") {
    const Dvpa d = fixture("lsu.vpa");
    const auto& a = d.alphabet();
    const LassoVerdict v1 = accepts(d, parse_lasso(a, "; c"));
    CHECK(v1.accepted);
    CHECK(v1.reason == VerdictReason::cycle);
    CHECK(v1.boundary_pair.has_value());
    CHECK(v1.recurring_priorities == std::set<unsigned>{2});
    const LassoVerdict v2 = accepts(d, parse_lasso(a, "; c r"));
    CHECK_FALSE(v2.accepted);
    CHECK(v2.reason == VerdictReason::cycle);
    const LassoVerdict v3 = accepts(d, parse_lasso(a, "; r"));
    CHECK_FALSE(v3.accepted);
    CHECK(v3.reason == VerdictReason::dead_run);
    CHECK(v3.death_pos == 0U);
    CHECK_FALSE(v3.boundary_pair);
    // net < 0 always dies
    const LassoVerdict v4 = accepts(d, parse_lasso(a, "c c c ; r"));
    CHECK(v4.reason == VerdictReason::dead_run);
    CHECK(v4.death_pos == 6U);
  }

  TEST_CASE("lsu against the long-horizon oracle on c r") {
    const Dvpa d = fixture("lsu.vpa");
    const LassoWord l = parse_lasso(d.alphabet(), "; c r");
    // 4 unrolled periods: only even positions (height 0, state s_rej) are steps
    Word w;
    for (int k = 0; k < 4; ++k) w.insert(w.end(), l.period.begin(), l.period.end());
    const RunTrace t = run_word(d, w);
    for (std::size_t i = 0; i + 1 < t.length(); ++i) {
      CHECK(t.step(i) == (i % 2 == 0));
      if (t.step(i)) CHECK_FALSE(d.acceptance().accepting(t.state(i)));
    }
    CHECK_FALSE(accepts(d, l).accepted);
  }

  TEST_CASE("internal-only parity automaton with priority 0") {
    const Dvpa d = parse(R"(vpa 1
calls
returns
internals i
stack
states s
initial s
acceptance parity
priorities s:0
int s i -> s
)");
    CHECK(accepts(d, parse_lasso(d.alphabet(), "; i")).accepted);
  }

  TEST_CASE("plain buchi sees accepting states off steps") {
    const Dvpa d = fixture("lsu-buchi.vpa");
    CHECK(accepts(d, parse_lasso(d.alphabet(), "; c r")).accepted);
    CHECK_FALSE(accepts(fixture("lsu.vpa"), parse_lasso(d.alphabet(), "; c r")).accepted);
  }

  TEST_CASE("unrolling invariance on random automata") {
    std::mt19937_64 rng(17);
    LassoGenerator gen(23);
    const AcceptanceKind kinds[] = {AcceptanceKind::buchi, AcceptanceKind::parity, AcceptanceKind::stair_buchi,
                                    AcceptanceKind::stair_parity};
    int mismatches = 0;
    for (int n = 0; n < 300; ++n) {
      testing::RandomDvpaOptions o;
      o.states = 2 + rng() % 3;
      o.kind = kinds[n % 4];
      o.density = 0.9;
      const Dvpa d = testing::random_dvpa(rng, o);
      const LassoWord l = gen.next(d.alphabet(), 6, n % 3 == 0 ? LassoPolicy::any : LassoPolicy::live);
      Word uv = l.prefix;
      uv.insert(uv.end(), l.period.begin(), l.period.end());
      Word vv = l.period;
      vv.insert(vv.end(), l.period.begin(), l.period.end());
      const bool base = accepts(d, l).accepted;
      if (accepts(d, {uv, l.period}).accepted != base) ++mismatches;
      if (accepts(d, {l.prefix, vv}).accepted != base) ++mismatches;
    }
    CHECK(mismatches == 0);
  }

  TEST_CASE("recurring steps agree with explicit future minima") {
    std::mt19937_64 rng(29);
    LassoGenerator gen(31);
    std::size_t checked = 0;
    for (int n = 0; n < 300; ++n) {
      testing::RandomDvpaOptions o;
      o.states = 2 + rng() % 2;
      o.density = 1.0;
      const Dvpa d = testing::random_dvpa(rng, o);
      const LassoWord l = gen.next(d.alphabet(), 6, LassoPolicy::live);
      const auto block = lasso_block(d, l);
      REQUIRE(block);
      const std::size_t len = block->block_end - block->block_begin;
      // heights after the block shift by a non-negative amount per block, so
      // two further blocks settle every future minimum inside the block
      const std::size_t horizon = block->block_end + 2 * len + l.period.size();
      const auto brute = testing::brute_recurring_steps(d, l, horizon, block->block_begin, block->block_end);
      std::set<std::size_t> mine;
      for (std::size_t i = 0; i < len; ++i)
        if (block->recurring_step[i]) mine.insert(block->block_begin + i);
      CHECK(mine == brute);
      const long net = profile(d.alphabet(), l).net;
      for (std::size_t i = 0; i < len; ++i) {
        if (!block->recurring_step[i]) continue;
        if (net == 0) CHECK(block->heights[i] == block->min_height);
        else CHECK(block->heights[i] <= block->min_height + static_cast<std::size_t>(block->shift));
      }
      ++checked;
    }
    CHECK(checked == 300);
  }

  TEST_CASE("stair and plain acceptance coincide without calls and returns") {
    std::mt19937_64 rng(37);
    LassoGenerator gen(41);
    for (int n = 0; n < 200; ++n) {
      testing::RandomDvpaOptions o;
      o.calls = 0;
      o.returns = 0;
      o.internals = 2;
      o.stack = 0;
      o.kind = n % 2 ? AcceptanceKind::stair_buchi : AcceptanceKind::stair_parity;
      const Dvpa d = testing::random_dvpa(rng, o);
      const Dvpa plain = with_kind(d, n % 2 ? AcceptanceKind::buchi : AcceptanceKind::parity);
      const LassoWord l = gen.next(d.alphabet(), 8, LassoPolicy::any);
      CHECK(accepts(d, l).accepted == accepts(plain, l).accepted);
    }
  }

  TEST_CASE("stair-buchi equals stair-parity with priorities 2 and 1") {
    std::mt19937_64 rng(43);
    LassoGenerator gen(47);
    for (int n = 0; n < 300; ++n) {
      testing::RandomDvpaOptions o;
      o.states = 3;
      const Dvpa d = testing::random_dvpa(rng, o);
      const Dvpa p = as_parity(d, AcceptanceKind::stair_parity);
      const LassoWord l = gen.next(d.alphabet(), 8, n % 2 ? LassoPolicy::live : LassoPolicy::any);
      CHECK(accepts(d, l).accepted == accepts(p, l).accepted);
    }
  }
}
