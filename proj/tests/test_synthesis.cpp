#include <catch2/catch_amalgamated.hpp>

#include "netsup/guideway.hpp"
#include "netsup/sim.hpp"
#include "netsup/synthesis.hpp"

using namespace netsup;

namespace {

EventLabel L(const char* s) { return EventLabel::parse(s); }

// Plain-label constraint: a controllable+observable, b uncontrollable
// observable, u uncontrollable unobservable.
ControlConstraint abu_constraint() {
    ControlConstraint c;
    c.controllable = {L("a")};
    c.observable = {L("a"), L("b")};
    return c;
}

Automaton random_plant(SplitMix64& rng, int max_states) {
    Automaton g;
    g.alphabet = {L("a"), L("b"), L("u")};
    int n = 2 + static_cast<int>(rng.next() % (max_states - 1));
    for (int i = 0; i < n; ++i) g.add_state(rng.next() % 2 == 0);
    for (int q = 0; q < n; ++q)
        for (const auto& lbl : g.alphabet)
            if (rng.next() % 3 != 0) g.add_transition(q, lbl, static_cast<int>(rng.next() % n));
    if (g.marked.empty()) g.marked.insert(static_cast<int>(rng.next() % n));
    return g;
}

std::set<int> random_bad(SplitMix64& rng, const Automaton& g) {
    std::set<int> bad;
    for (int q = 1; q < g.num_states(); ++q)
        if (rng.next() % 4 == 0) bad.insert(q);
    return bad;
}

Automaton closed_loop(const Supervisor& sup, const Automaton& plant) {
    return determinize(sync_product({sup.automaton, plant}));
}

} // namespace

TEST_CASE("control constraint requires controllable labels to be observable") {
    ControlConstraint c;
    c.controllable = {L("a")};
    CHECK_THROWS_AS(c.validate(), Error);
    c.observable = {L("a")};
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("networked control constraint spans commands and delivered observations") {
    auto gw = build_guideway();
    auto c = networked_control_constraint(gw.alph);
    CHECK(c.controllable ==
          LabelSet{L("cmd_in:{12}"), L("cmd_in:{22}"), L("cmd_in:{12,22}")});
    CHECK(c.observable == LabelSet{L("cmd_in:{12}"), L("cmd_in:{22}"), L("cmd_in:{12,22}"),
                                   L("out:12"), L("out:16"), L("out:22"), L("out:26")});
}

TEST_CASE("a controllable step into a bad state is disabled") {
    // 0 -a-> 1 -b-> 2 with 2 bad: the uncontrollable b forces a off at 0.
    Automaton g;
    g.alphabet = {L("a"), L("b")};
    for (int i = 0; i < 3; ++i) g.add_state(i == 0);
    g.add_transition(0, L("a"), 1);
    g.add_transition(1, L("b"), 2);
    SynthesisProblem prob{g, abu_constraint(), {2}};

    auto res = synthesize_supremal(prob);
    REQUIRE_FALSE(res.empty());
    auto loop = closed_loop(*res.supervisor, g);
    CHECK(loop.num_states() == 1);
    CHECK(loop.num_transitions() == 0);

    auto oracle = brute_force_supremal(prob);
    REQUIRE_FALSE(oracle.empty());
    CHECK(language_equal(loop, closed_loop(*oracle.supervisor, g), LanguageMode::Closed));
}

TEST_CASE("empty result reports the pruning reason") {
    Automaton g;
    g.alphabet = {L("a"), L("b")};
    g.add_state(true);
    g.add_transition(0, L("a"), 0);

    SECTION("initial state bad") {
        SynthesisProblem prob{g, abu_constraint(), {0}};
        auto res = synthesize_supremal(prob);
        REQUIRE(res.empty());
        CHECK(res.empty_reason.find("bad-containment") != std::string::npos);
    }
    SECTION("disabling everything blocks") {
        // 0 unmarked, only escape is controllable into a bad-free marked
        // state 1 that b then drags into bad 2: nothing survives.
        Automaton h;
        h.alphabet = {L("a"), L("b")};
        h.add_state(false);
        h.add_state(true);
        h.add_state(false);
        h.add_transition(0, L("a"), 1);
        h.add_transition(1, L("b"), 2);
        SynthesisProblem prob{h, abu_constraint(), {2}};
        auto res = synthesize_supremal(prob);
        REQUIRE(res.empty());
        CHECK(res.empty_reason.find("blocking") != std::string::npos);
        CHECK(brute_force_supremal(prob).empty());
    }
}

TEST_CASE("no pruning when nothing is bad and the plant is nonblocking") {
    Automaton g;
    g.alphabet = {L("a"), L("b"), L("u")};
    for (int i = 0; i < 3; ++i) g.add_state(i == 2);
    g.add_transition(0, L("u"), 1);
    g.add_transition(1, L("a"), 2);
    g.add_transition(2, L("b"), 0);
    SynthesisProblem prob{g, abu_constraint(), {}};
    auto res = synthesize_supremal(prob);
    REQUIRE_FALSE(res.empty());
    CHECK(language_equal(closed_loop(*res.supervisor, g), determinize(g), LanguageMode::Closed));
    CHECK(language_equal(closed_loop(*res.supervisor, g), determinize(g), LanguageMode::Marked));
}

TEST_CASE("synthesized supervisors pass every predicate and match brute force") {
    SplitMix64 rng(101);
    int nonempty = 0;
    for (int trial = 0; trial < 30; ++trial) {
        auto g = random_plant(rng, 4);
        SynthesisProblem prob{g, abu_constraint(), random_bad(rng, g)};
        auto res = synthesize_supremal(prob);
        auto oracle = brute_force_supremal(prob);
        CHECK(res.empty() == oracle.empty());
        if (res.empty()) continue;
        ++nonempty;
        const auto& sup = *res.supervisor;
        CHECK(check_controllability(sup.automaton, g, prob.constraint).controllable);
        CHECK(check_normality(sup.automaton, g, prob.constraint).normal);
        CHECK(check_safety(sup.automaton, g, prob.bad).safe);
        CHECK(is_nonblocking(sync_product({sup.automaton, g})).nonblocking);
        CHECK(check_local_maximality(sup, prob));
        auto a = closed_loop(sup, g);
        auto b = closed_loop(*oracle.supervisor, g);
        CHECK(language_equal(a, b, LanguageMode::Closed));
        CHECK(language_equal(a, b, LanguageMode::Marked));
    }
    CHECK(nonempty >= 10); // the sample must actually exercise synthesis
}

TEST_CASE("enlarging the bad set never enlarges the closed loop") {
    SplitMix64 rng(202);
    for (int trial = 0; trial < 15; ++trial) {
        auto g = random_plant(rng, 4);
        auto bad = random_bad(rng, g);
        SynthesisProblem small{g, abu_constraint(), bad};
        auto more = bad;
        more.insert(g.num_states() - 1);
        SynthesisProblem big{g, abu_constraint(), more};
        auto rs = synthesize_supremal(small);
        auto rb = synthesize_supremal(big);
        if (rb.empty()) continue;
        REQUIRE_FALSE(rs.empty());
        CHECK(language_included(closed_loop(*rb.supervisor, g), closed_loop(*rs.supervisor, g),
                                LanguageMode::Closed));
    }
}

TEST_CASE("needlessly strict supervisors fail local maximality") {
    Automaton g;
    g.alphabet = {L("a"), L("u")};
    g.add_state(true);
    g.add_state(true);
    g.add_transition(0, L("a"), 1);
    ControlConstraint c;
    c.controllable = {L("a")};
    c.observable = {L("a")};
    SynthesisProblem prob{g, c, {}};

    Supervisor strict;
    strict.automaton.alphabet = g.alphabet;
    strict.automaton.add_state(true);
    strict.automaton.add_transition(0, L("u"), 0);
    strict.cells = {{0}};
    CHECK_FALSE(check_local_maximality(strict, prob));

    auto res = synthesize_supremal(prob);
    REQUIRE_FALSE(res.empty());
    CHECK(check_local_maximality(*res.supervisor, prob));
}

TEST_CASE("controllability rejects a supervisor that blocks uncontrollable moves") {
    Automaton g;
    g.alphabet = {L("a"), L("b")};
    g.add_state(true);
    g.add_state(true);
    g.add_transition(0, L("b"), 1);
    Automaton sup;
    sup.alphabet = g.alphabet;
    sup.add_state(true);
    sup.add_transition(0, L("a"), 0); // b missing
    auto r = check_controllability(sup, g, abu_constraint());
    REQUIRE_FALSE(r.controllable);
    CHECK(*r.label == L("b"));
}

TEST_CASE("normality rejects decisions that depend on unobservable history") {
    Automaton g;
    g.alphabet = {L("a"), L("b")};
    g.add_state(true);
    g.add_transition(0, L("a"), 0);
    g.add_transition(0, L("b"), 0);
    // Supervisor enabling a only before the first a: both strings project to
    // the same cell, different decisions.
    Automaton sup;
    sup.alphabet = g.alphabet;
    sup.add_state(true);
    sup.add_state(true);
    sup.add_transition(0, L("a"), 1);
    sup.add_transition(0, L("b"), 0);
    sup.add_transition(1, L("b"), 1);
    auto r = check_normality(sup, g, abu_constraint());
    REQUIRE_FALSE(r.normal);
    CHECK(r.witness_a != r.witness_b);
}

TEST_CASE("safety failure yields a path to the collision") {
    Automaton g;
    g.alphabet = {L("a"), L("b")};
    for (int i = 0; i < 3; ++i) g.add_state(true);
    g.add_transition(0, L("a"), 1);
    g.add_transition(1, L("b"), 2);
    Automaton permissive;
    permissive.alphabet = g.alphabet;
    permissive.add_state(true);
    permissive.add_transition(0, L("a"), 0);
    permissive.add_transition(0, L("b"), 0);
    auto r = check_safety(permissive, g, {2});
    REQUIRE_FALSE(r.safe);
    CHECK(r.path == std::vector<EventLabel>{L("a"), L("b")});
    CHECK(check_safety(permissive, g, {}).safe);
}

TEST_CASE("brute force enforces its size limits") {
    SplitMix64 rng(33);
    auto g = random_plant(rng, 4);
    SynthesisProblem prob{g, abu_constraint(), {}};
    BruteForceLimits tight;
    tight.max_states = 1;
    CHECK_THROWS_AS(brute_force_supremal(prob, tight), Error);
}

TEST_CASE("eventual observability of lossy events") {
    AlphabetSpec alph;
    alph.sigma = {"l", "o", "u"};
    alph.sigma_o = {"l", "o"};
    alph.sigma_ol = {"l"};

    SECTION("reliable follow-up event qualifies") {
        Automaton g;
        g.alphabet = {L("l"), L("o")};
        for (int i = 0; i < 3; ++i) g.add_state(i == 2);
        g.add_transition(0, L("l"), 1);
        g.add_transition(1, L("o"), 2);
        CHECK(check_eventual_observability(g, alph).eventually_observable);
    }
    SECTION("unobservable self-loop after a loss never reports") {
        Automaton g;
        g.alphabet = {L("l"), L("u")};
        g.add_state(true);
        g.add_state(true);
        g.add_transition(0, L("l"), 1);
        g.add_transition(1, L("u"), 1);
        auto r = check_eventual_observability(g, alph);
        REQUIRE_FALSE(r.eventually_observable);
        CHECK(r.event == "l");
    }
    SECTION("dead end after a loss never reports") {
        Automaton g;
        g.alphabet = {L("l")};
        g.add_state(true);
        g.add_state(true);
        g.add_transition(0, L("l"), 1);
        CHECK_FALSE(check_eventual_observability(g, alph).eventually_observable);
    }
    SECTION("the guideway plant is eventually observable") {
        auto gw = build_guideway();
        auto base = sync_product({gw.v1, gw.v2});
        CHECK(check_eventual_observability(base, gw.alph).eventually_observable);
    }
}
