#include <doctest.h>

#include <random>

#include "stairvpa/run.hpp"
#include "stairvpa/summaries.hpp"
#include "support.hpp"

using namespace stairvpa;
using testing::fixture;
using testing::parse;

namespace {

StateId S(const Dvpa& d, const char* name) { return *d.find_state(name); }

// Each flag bit the saturation claims must be realized by its witness.
void check_wm_witnesses(const Dvpa& d, const FlaggedRelation& wm) {
  const auto& acc = d.acceptance();
  for (StateId q = 0; q < d.num_states(); ++q)
    for (StateId q2 = 0; q2 < d.num_states(); ++q2)
      for (StepFlag f : {StepFlag::sees, StepFlag::avoid}) {
        if (!wm.has(q, q2, f)) continue;
        const auto w = wm.witness(q, q2, f);
        REQUIRE(w);
        const RunTrace t = run_word(d, Configuration{q, {}}, *w);
        REQUIRE_FALSE(t.death());
        CHECK(t.last() == Configuration{q2, {}});
        bool seen = false;
        for (std::size_t i = 0; i < t.length(); ++i) seen = seen || (t.height(i) == 0 && acc.accepting(t.state(i)));
        CHECK(seen == (f == StepFlag::sees));
      }
}

void check_core_witnesses(const Dvpa& d, const CoupledRelation& cud) {
  const auto& acc = d.acceptance();
  for (StepFlag f : {StepFlag::sees, StepFlag::avoid})
    for (const auto& t : cud.core_entries(f)) {
      const auto w = cud.core_witness(t, f);
      REQUIRE(w);
      REQUIRE_FALSE(w->stack.empty());
      REQUIRE_FALSE(w->ascent.empty());
      CHECK(w->ascent.front().kind == SymbolKind::call);
      const RunTrace up = run_word(d, Configuration{t.q, {}}, w->ascent);
      REQUIRE_FALSE(up.death());
      CHECK(up.last() == Configuration{t.p, w->stack});
      bool seen = false;
      for (std::size_t i = 0; i < up.length(); ++i) seen = seen || (up.step(i) && acc.accepting(up.state(i)));
      CHECK(seen == (f == StepFlag::sees));
      // the bottom symbol stays until the very end of the ascent
      for (std::size_t i = 1; i < up.length(); ++i) CHECK(up.height(i) >= 1);
      const RunTrace down = run_word(d, Configuration{t.d, w->stack}, w->descent);
      REQUIRE_FALSE(down.death());
      CHECK(down.last() == Configuration{t.d2, {}});
      for (std::size_t i = 0; i + 1 < down.length(); ++i) CHECK(down.height(i) >= 1);
    }
}

}  // namespace

TEST_SUITE("wm_summaries") {
  TEST_CASE("fig2 examples") {
    const Dvpa d = fixture("fig2.vpa");
    const auto wm = wm_summaries(d);
    const StateId q = S(d, "q"), q1 = S(d, "q'"), q2 = S(d, "q''");
    CHECK(wm.avoid(q, q1));
    CHECK(wm.sees(q, q2));
    CHECK(d.alphabet().format_word(*wm.witness(q, q1, StepFlag::avoid)) == "c r2");
    CHECK(wm.avoid(q, q));
    CHECK_FALSE(wm.sees(q, q));
    CHECK(wm.sees(q2, q2));
    CHECK_FALSE(wm.avoid(q2, q2));
  }

  TEST_CASE("empty word is well-matched") {
    for (const auto& name : testing::small_fixtures()) {
      const Dvpa d = fixture(name);
      const auto wm = wm_summaries(d);
      for (StateId q = 0; q < d.num_states(); ++q) {
        CHECK(wm.reach(q, q));
        if (!d.acceptance().accepting(q)) CHECK(wm.avoid(q, q));
      }
    }
  }

  TEST_CASE("agrees with enumeration of well-matched words up to length 8") {
    for (const auto& name : testing::small_fixtures()) {
      CAPTURE(name);
      const Dvpa d = fixture(name);
      const auto wm = wm_summaries(d);
      const auto brute = testing::brute_wm(d, 8);
      for (StateId q = 0; q < d.num_states(); ++q)
        for (StateId q2 = 0; q2 < d.num_states(); ++q2) {
          auto it = brute.find({q, q2});
          CHECK(wm.flags(q, q2) == (it == brute.end() ? 0 : it->second));
        }
      check_wm_witnesses(d, wm);
    }
  }

  TEST_CASE("random automata: enumeration is contained in the saturation") {
    std::mt19937_64 rng(101);
    for (int n = 0; n < 150; ++n) {
      testing::RandomDvpaOptions o;
      o.states = 2 + rng() % 3;
      const Dvpa d = testing::random_dvpa(rng, o);
      const auto wm = wm_summaries(d);
      for (const auto& [pair, flags] : testing::brute_wm(d, 6))
        CHECK((wm.flags(pair.first, pair.second) & flags) == flags);
      check_wm_witnesses(d, wm);
    }
  }
}

TEST_SUITE("reachable") {
  TEST_CASE("fig1 left reaches everything") {
    const Dvpa d = fixture("fig1-left.vpa");
    const auto r = reachable(d);
    for (StateId q = 0; q < d.num_states(); ++q) CHECK(r.states[q]);
  }

  TEST_CASE("lsu reaches both states") {
    const auto r = reachable(fixture("lsu.vpa"));
    CHECK(r.states[0]);
    CHECK(r.states[1]);
  }

  TEST_CASE("isolated state") {
    const Dvpa d = parse(R"(vpa 1
calls
returns
internals i
stack
states a s
initial a
acceptance stair-buchi
final s
int a i -> a
int s i -> a
)");
    const auto r = reachable(d);
    CHECK(r.states[S(d, "a")]);
    CHECK_FALSE(r.states[S(d, "s")]);
    CHECK_FALSE(r.access_word(S(d, "s")));
  }

  TEST_CASE("access words lead to their state") {
    for (const auto& name : testing::small_fixtures()) {
      const Dvpa d = fixture(name);
      const auto r = reachable(d);
      for (StateId q = 0; q < d.num_states(); ++q) {
        if (!r.states[q]) continue;
        const auto w = r.access_word(q);
        REQUIRE(w);
        const RunTrace t = run_word(d, *w);
        CHECK_FALSE(t.death());
        CHECK(t.last().state == q);
      }
    }
  }
}

TEST_SUITE("step_graph") {
  TEST_CASE("fig1 left edges") {
    const Dvpa d = fixture("fig1-left.vpa");
    const auto g = step_graph(d);
    auto edge = [&](const char* a, const char* b) { return g.edges.count({S(d, a), S(d, b)}) != 0; };
    CHECK(edge("q0", "q2"));
    CHECK(edge("q0", "q4"));
    CHECK(edge("q2", "q3"));
    CHECK(edge("q3", "q2"));
    CHECK(edge("q3", "q3"));
    CHECK(edge("q2", "q2"));
    CHECK(edge("q4", "q4"));
    for (const char* v : {"q0", "q2", "q3", "q4"}) CHECK(g.has_vertex(S(d, v)));
    // a pending call keeps q1 on every step of c1 i1^ω
    CHECK(g.has_vertex(S(d, "q1")));
    CHECK(edge("q1", "q1"));
  }

  TEST_CASE("without pending calls q1 drops out") {
    const Dvpa d = fixture("fig1-left.vpa");
    const auto g = step_graph(d, false);
    CHECK_FALSE(g.has_vertex(S(d, "q1")));
    CHECK(g.vertices.size() == 4);
  }

  TEST_CASE("internal-only automaton gives its transition graph") {
    const Dvpa d = fixture("infinitely-a.vpa");
    const auto g = step_graph(d);
    std::set<std::pair<StateId, StateId>> plain;
    for (StateId q = 0; q < d.num_states(); ++q)
      for (std::uint32_t i = 0; i < d.alphabet().internals().size(); ++i)
        if (auto t = d.internal(q, i)) plain.insert({q, *t});
    CHECK(g.edges == plain);
  }

  TEST_CASE("agrees with successive steps of runs up to length 10") {
    for (const auto& name : testing::small_fixtures()) {
      CAPTURE(name);
      const Dvpa d = fixture(name);
      const auto g = step_graph(d);
      const auto brute = testing::brute_steps(d, 10);
      CHECK(g.edges == brute.edges);
      CHECK(std::set<StateId>(g.vertices.begin(), g.vertices.end()) == brute.vertices);
    }
  }

  TEST_CASE("random automata agree with bounded runs") {
    std::mt19937_64 rng(103);
    for (int n = 0; n < 100; ++n) {
      testing::RandomDvpaOptions o;
      o.states = 2 + rng() % 2;
      o.stack = 1;
      const Dvpa d = testing::random_dvpa(rng, o);
      const auto g = step_graph(d);
      const auto brute = testing::brute_steps(d, 9);
      for (const auto& e : brute.edges) CHECK(g.edges.count(e) == 1);
    }
  }
}

TEST_SUITE("coupled_relations") {
  TEST_CASE("fig2 core quadruple") {
    const Dvpa d = fixture("fig2.vpa");
    const auto cud = coupled_relations(d);
    const StateId q = S(d, "q"), q1 = S(d, "q'"), q2 = S(d, "q''");
    CHECK(cud.core({q, q, q2, q1}, StepFlag::sees));
    check_core_witnesses(d, cud);
  }

  TEST_CASE("lsu core quadruple") {
    const Dvpa d = fixture("lsu.vpa");
    const auto cud = coupled_relations(d);
    const StateId s = S(d, "s_rej");
    CHECK(cud.core({s, s, s, s}, StepFlag::sees));
    check_core_witnesses(d, cud);
  }

  TEST_CASE("no accepting state means nothing is seen") {
    const Dvpa d = parse(R"(vpa 1
calls c
returns r
internals i
stack Z
states a b
initial a
acceptance stair-buchi
final
call a c -> b Z
call b c -> a Z
ret a Z r -> b
ret b Z r -> a
int a i -> b
)");
    const auto cud = coupled_relations(d);
    CHECK(cud.core_entries(StepFlag::sees).empty());
    CHECK(cud.full_entries(StepFlag::sees).empty());
    CHECK_FALSE(cud.core_entries(StepFlag::avoid).empty());
  }

  TEST_CASE("core is contained in full") {
    for (const auto& name : testing::small_fixtures()) {
      const Dvpa d = fixture(name);
      const auto cud = coupled_relations(d);
      for (StepFlag f : {StepFlag::sees, StepFlag::avoid})
        for (const auto& t : cud.core_entries(f)) CHECK(cud.full(t, f));
    }
  }

  TEST_CASE("bounded ascents and descents are contained in the core") {
    for (const auto& name : testing::small_fixtures()) {
      CAPTURE(name);
      const Dvpa d = fixture(name);
      const auto cud = coupled_relations(d);
      for (const auto& [t, flags] : testing::brute_core(d, 4)) {
        if (flags & bit(StepFlag::sees)) CHECK(cud.core(t, StepFlag::sees));
        if (flags & bit(StepFlag::avoid)) CHECK(cud.core(t, StepFlag::avoid));
      }
      check_core_witnesses(d, cud);
    }
  }

  TEST_CASE("random automata") {
    std::mt19937_64 rng(107);
    for (int n = 0; n < 100; ++n) {
      testing::RandomDvpaOptions o;
      o.states = 2 + rng() % 2;
      const Dvpa d = testing::random_dvpa(rng, o);
      const auto cud = coupled_relations(d);
      for (const auto& [t, flags] : testing::brute_core(d, 3)) {
        if (flags & bit(StepFlag::sees)) CHECK(cud.core(t, StepFlag::sees));
        if (flags & bit(StepFlag::avoid)) CHECK(cud.core(t, StepFlag::avoid));
      }
      check_core_witnesses(d, cud);
    }
  }
}
