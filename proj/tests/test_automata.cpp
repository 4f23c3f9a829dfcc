#include <catch2/catch_amalgamated.hpp>

#include "netsup/automaton.hpp"
#include "netsup/sim.hpp"

using namespace netsup;

namespace {

EventLabel L(const char* s) { return EventLabel::parse(s); }

Automaton chain3_with_orphan() {
    Automaton a;
    a.alphabet = {L("x")};
    for (int i = 0; i < 4; ++i) a.add_state(i == 2);
    a.add_transition(0, L("x"), 1);
    a.add_transition(1, L("x"), 2);
    return a;
}

// Uniform random automaton over up to 3 plain labels, used for the
// algebraic property checks.
Automaton random_automaton(SplitMix64& rng, int max_states, int num_labels) {
    Automaton a;
    std::vector<EventLabel> labels;
    for (int i = 0; i < num_labels; ++i) {
        EventLabel l = EventLabel::plain(std::string(1, static_cast<char>('a' + i)));
        labels.push_back(l);
        a.alphabet.insert(l);
    }
    int n = 1 + static_cast<int>(rng.next() % max_states);
    for (int i = 0; i < n; ++i) a.add_state(rng.next() % 2 == 0);
    for (int q = 0; q < n; ++q)
        for (const auto& l : labels)
            if (rng.next() % 2 == 0) a.add_transition(q, l, static_cast<int>(rng.next() % n));
    if (a.marked.empty()) a.marked.insert(0);
    return a;
}

} // namespace

TEST_CASE("product with an all-marked self-loop automaton is the identity") {
    Automaton a;
    a.alphabet = {L("p"), L("q")};
    for (int i = 0; i < 3; ++i) a.add_state(i == 2);
    a.add_transition(0, L("p"), 1);
    a.add_transition(1, L("q"), 2);
    a.add_transition(2, L("p"), 0);

    Automaton one;
    one.alphabet = a.alphabet;
    one.add_state(true);
    one.add_transition(0, L("p"), 0);
    one.add_transition(0, L("q"), 0);

    auto prod = sync_product({a, one});
    CHECK(prod == reachable(a));
}

TEST_CASE("product synchronizes shared labels and interleaves private ones") {
    // Component 1 over {a}: a: 0 -> 1. Component 2 over {a, b}: a: 0 -> 1,
    // b: 1 -> 0. Hand enumeration: (0,0) -a-> (1,1) -b-> (1,0), then nothing
    // fires: a needs both components, b is undefined at component-2 state 0.
    Automaton c1;
    c1.alphabet = {L("a")};
    c1.add_state();
    c1.add_state(true);
    c1.add_transition(0, L("a"), 1);

    Automaton c2;
    c2.alphabet = {L("a"), L("b")};
    c2.add_state();
    c2.add_state(true);
    c2.add_transition(0, L("a"), 1);
    c2.add_transition(1, L("b"), 0);

    auto prod = sync_product_with_origins({c1, c2});
    REQUIRE(prod.automaton.num_states() == 3);
    CHECK(prod.automaton.num_transitions() == 2);
    CHECK(prod.origins[0] == std::vector<int>{0, 0});
    CHECK(prod.origins[1] == std::vector<int>{1, 1});
    CHECK(prod.origins[2] == std::vector<int>{1, 0});
    CHECK(prod.automaton.successors(0, L("a"))->at(0) == 1);
    CHECK(prod.automaton.successors(1, L("b"))->at(0) == 2);
    CHECK_FALSE(prod.automaton.has_transition(2, L("a")));
    CHECK_FALSE(prod.automaton.has_transition(2, L("b")));
    CHECK(prod.automaton.marked == std::set<int>{1});
}

TEST_CASE("product of an empty list is rejected") {
    CHECK_THROWS_AS(sync_product({}), Error);
}

TEST_CASE("reachable drops orphan states and is idempotent") {
    auto a = chain3_with_orphan();
    auto r = reachable(a);
    CHECK(r.num_states() == 3);
    CHECK(r.marked == std::set<int>{2});
    CHECK(reachable(r) == r);
}

TEST_CASE("nonblocking analysis") {
    SECTION("all states marked") {
        Automaton a;
        a.alphabet = {L("x")};
        a.add_state(true);
        a.add_state(true);
        a.add_transition(0, L("x"), 1);
        CHECK(is_nonblocking(a).nonblocking);
    }
    SECTION("unmarked dead end is a witness") {
        Automaton a;
        a.alphabet = {L("x")};
        a.add_state(true);
        a.add_state(false);
        a.add_transition(0, L("x"), 1);
        auto r = is_nonblocking(a);
        REQUIRE_FALSE(r.nonblocking);
        CHECK(r.blocking_state == 1);
        REQUIRE(r.path.size() == 1);
        CHECK(r.path[0] == L("x"));
    }
    SECTION("cycle with one marked state") {
        Automaton a;
        a.alphabet = {L("x")};
        for (int i = 0; i < 3; ++i) a.add_state(i == 1);
        for (int i = 0; i < 3; ++i) a.add_transition(i, L("x"), (i + 1) % 3);
        CHECK(is_nonblocking(a).nonblocking);
    }
}

TEST_CASE("observer with full observation is the reachable automaton in singleton cells") {
    auto a = reachable(chain3_with_orphan());
    auto obs = observer(a, a.alphabet);
    CHECK(obs.automaton == a);
    for (size_t c = 0; c < obs.cells.size(); ++c)
        CHECK(obs.cells[c] == std::vector<int>{static_cast<int>(c)});
}

TEST_CASE("observer with no observable labels is a single closure cell") {
    auto a = reachable(chain3_with_orphan());
    auto obs = observer(a, {});
    REQUIRE(obs.cells.size() == 1);
    CHECK(obs.cells[0] == std::vector<int>{0, 1, 2});
    CHECK(obs.automaton.num_transitions() == 0);
}

TEST_CASE("observer groups unobservable closures") {
    // 0 -u-> 1, 0 -o-> 2, 1 -o-> 3 with only o observable: initial cell
    // {0,1}, then on o the cell {2,3}.
    Automaton a;
    a.alphabet = {L("u"), L("o")};
    for (int i = 0; i < 4; ++i) a.add_state(i == 3);
    a.add_transition(0, L("u"), 1);
    a.add_transition(0, L("o"), 2);
    a.add_transition(1, L("o"), 3);
    auto obs = observer(a, {L("o")});
    REQUIRE(obs.cells.size() == 2);
    CHECK(obs.cells[0] == std::vector<int>{0, 1});
    CHECK(obs.cells[1] == std::vector<int>{2, 3});
    CHECK(obs.automaton.marked == std::set<int>{1});
}

TEST_CASE("observer rejects labels outside the alphabet") {
    auto a = reachable(chain3_with_orphan());
    CHECK_THROWS_AS(observer(a, {L("nope")}), Error);
}

TEST_CASE("product is commutative and associative up to canonical numbering") {
    SplitMix64 rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        auto a = random_automaton(rng, 4, 2);
        auto b = random_automaton(rng, 4, 3);
        auto c = random_automaton(rng, 3, 2);
        CHECK(sync_product({a, b}) == sync_product({b, a}));
        CHECK(sync_product({a, b, c}) == sync_product({sync_product({a, b}), c}));
    }
}

TEST_CASE("construction is deterministic") {
    SplitMix64 r1(11), r2(11);
    auto a1 = random_automaton(r1, 4, 3);
    auto a2 = random_automaton(r2, 4, 3);
    CHECK(a1 == a2);
    CHECK(sync_product({a1, a1}) == sync_product({a2, a2}));
}

TEST_CASE("language inclusion and equality on small DFAs") {
    Automaton a; // a b
    a.alphabet = {L("a"), L("b")};
    for (int i = 0; i < 3; ++i) a.add_state(i == 2);
    a.add_transition(0, L("a"), 1);
    a.add_transition(1, L("b"), 2);

    Automaton b = a; // adds a self-loop, strictly larger closed language
    b.add_transition(2, L("a"), 2);

    CHECK(language_included(a, b, LanguageMode::Closed));
    CHECK(language_included(a, b, LanguageMode::Marked));
    CHECK_FALSE(language_included(b, a, LanguageMode::Closed));
    auto w = dfa_inclusion_witness(b, a, LanguageMode::Closed);
    REQUIRE(w.has_value());
    CHECK(*w == std::vector<EventLabel>{L("a"), L("b"), L("a")});
    CHECK(language_equal(a, a, LanguageMode::Marked));
}

TEST_CASE("determinize resolves nondeterministic choice") {
    Automaton a;
    a.alphabet = {L("x"), L("y")};
    for (int i = 0; i < 3; ++i) a.add_state(i == 2);
    a.add_transition(0, L("x"), 1);
    a.add_transition(0, L("x"), 2);
    a.add_transition(1, L("y"), 2);
    auto d = determinize(a);
    CHECK(d.deterministic());
    CHECK(d.num_states() == 3); // {0}, {1,2}, {2}
    CHECK(d.marked == std::set<int>{1, 2});
}

TEST_CASE("minimize_dfa merges equivalent states and preserves both languages") {
    // Two interchangeable middle states.
    Automaton a;
    a.alphabet = {L("x"), L("y")};
    for (int i = 0; i < 4; ++i) a.add_state(i == 3);
    a.add_transition(0, L("x"), 1);
    a.add_transition(0, L("y"), 2);
    a.add_transition(1, L("x"), 3);
    a.add_transition(2, L("x"), 3);
    auto m = minimize_dfa(a);
    CHECK(m.num_states() == 3);
    CHECK(language_equal(a, m, LanguageMode::Closed));
    CHECK(language_equal(a, m, LanguageMode::Marked));
    CHECK(minimize_dfa(m) == m);
}

TEST_CASE("minimize_dfa distinguishes states by marking") {
    Automaton a;
    a.alphabet = {L("x")};
    a.add_state(false);
    a.add_state(true);
    a.add_transition(0, L("x"), 1);
    a.add_transition(1, L("x"), 0);
    auto m = minimize_dfa(a);
    CHECK(m.num_states() == 2);
    CHECK_THROWS_AS(minimize_dfa([] {
                        Automaton n;
                        n.alphabet = {L("x")};
                        n.add_state(true);
                        n.add_state(true);
                        n.add_transition(0, L("x"), 0);
                        n.add_transition(0, L("x"), 1);
                        return n;
                    }()),
                    Error);
}

TEST_CASE("minimization on random DFAs preserves languages and is minimal") {
    SplitMix64 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        auto a = determinize(random_automaton(rng, 5, 2));
        auto m = minimize_dfa(a);
        CHECK(language_equal(a, m, LanguageMode::Closed));
        CHECK(language_equal(a, m, LanguageMode::Marked));
        CHECK(minimize_dfa(m).num_states() == m.num_states());
        CHECK(m.num_states() <= reachable(a).num_states());
    }
}
