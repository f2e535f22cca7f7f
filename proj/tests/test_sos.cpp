#include <doctest.h>

#include <thread>

#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "tocsp/equiv.hpp"
#include "tocsp/syntax.hpp"

using namespace tocsp;
using namespace tocsp::testing;

namespace {
const Alphabet& abc() {
    static const Alphabet a({"a", "b", "c", "d", "e"});
    return a;
}
Term P(const std::string& s) { return parse_process(s, abc()); }
const Label a = Label::visible(0), b = Label::visible(1), c = Label::visible(2);
const Label TAU = Label::tau(), T = Label::timeout();
std::vector<Move> moves(std::initializer_list<Move> ms) {
    std::vector<Move> v(ms);
    std::sort(v.begin(), v.end());
    return v;
}
}  // namespace

TEST_CASE("initials") {
    CHECK(initials(P("a.0 + t.b.0")) == Initials{ActionSet::single(0), false});
    CHECK(initials(P("theta{}{}(a.0 + tau.0)")) == Initials{ActionSet{}, true});
    CHECK(initials(P("rec x { x = tau.x }")) == Initials{ActionSet{}, true});
    CHECK(initials(P("t.a.0")) == Initials{});
}

TEST_CASE("derive_transitions follows the rules") {
    CHECK(derive_transitions(P("psi{a}(t.b.0)")) == moves({{T, P("theta{a}(b.0)")}}));
    CHECK(derive_transitions(P("theta{a}{a}(b.0)")) == moves({{b, nil()}}));
    Term r = P("rename{(a,b),(a,c)}(a.0)");
    Term r0 = rename({{0, 1}, {0, 2}}, nil());
    CHECK(derive_transitions(r) == moves({{b, r0}, {c, r0}}));
    CHECK(derive_transitions(P("a.0 |[a]| a.0")) == moves({{a, P("0 |[a]| 0")}}));
    // Interleaving of τ and t outside the synchronisation set.
    CHECK(derive_transitions(P("tau.0 |[a]| t.0")) == moves({{TAU, P("0 |[a]| t.0")}, {T, P("tau.0 |[a]| 0")}}));
    CHECK(derive_transitions(P("hide {a} in (a.b.0 + c.0)")) ==
          moves({{TAU, P("hide {a} in b.0")}, {c, P("hide {a} in 0")}}));
    CHECK(derive_transitions(P("rename{(a,b)}(c.0 + tau.0 + t.0)")) ==
          moves({{TAU, rename({{0, 1}}, nil())}, {T, rename({{0, 1}}, nil())}}));
}

TEST_CASE("theta: τ keeps the wrapper, other labels strip it") {
    // a ∈ U is allowed; b ∉ U is blocked because τ is enabled.
    CHECK(derive_transitions(P("theta{}{a}(a.c.0 + b.0 + tau.a.0)")) ==
          moves({{a, P("c.0")}, {TAU, P("theta{}{a}(a.0)")}}));
    // No initial in L ∪ {τ}: everything passes and the wrapper disappears.
    CHECK(derive_transitions(P("theta{c}{a,c}(b.0 + t.a.0)")) == moves({{b, nil()}, {T, P("a.0")}}));
    // An initial in L blocks actions outside U, including time-outs.
    CHECK(derive_transitions(P("theta{c}{c}(c.0 + b.0 + t.0)")) == moves({{c, nil()}}));
}

TEST_CASE("psi only acts on time-outs") {
    CHECK(derive_transitions(P("psi{a}(a.0 + t.b.0)")) == moves({{a, nil()}}));
    CHECK(derive_transitions(P("psi{a}(b.0 + t.b.0)")) == moves({{b, nil()}, {T, P("theta{a}(b.0)")}}));
    CHECK(derive_transitions(P("psi{a}(tau.b.0 + t.b.0)")) == moves({{TAU, P("b.0")}}));
}

TEST_CASE("recursion unfolds") {
    Term r = P("rec x { x = a.x }");
    CHECK(derive_transitions(r) == moves({{a, r}}));
    CHECK_THROWS_AS(initials(P("rec x { x = x }")), BudgetExceeded);
    CHECK_THROWS_AS(initials(var("x")), InvalidTerm);
    CHECK_THROWS_AS(derive_transitions(P("rec x { x = theta{a}(x) }")), InvalidTerm);
}

TEST_CASE("explore") {
    Lts l = explore({P("a.0")}, 100);
    CHECK(l.size() == 2);
    CHECK(l.transition_count() == 1);
    CHECK(l.complete);
    Lts loop = explore({P("rec x { x = a.x }")}, 100);
    CHECK(loop.size() == 1);
    CHECK(loop.transition_count() == 1);
    CHECK(loop.targets[0] == 0);
    Lts big = explore({P("rec x { x = a.(x || x) }")}, 10);
    CHECK_FALSE(big.complete);
    Lts two = explore({P("a.0"), P("a.0"), P("b.0")}, 100);
    CHECK(two.roots.size() == 3);
    CHECK(two.roots[0] == two.roots[1]);
}

TEST_CASE("relevant alphabet") {
    CHECK(relevant_alphabet(explore({P("a.0 + t.b.0")})) == ActionSet::first_n(2));
    CHECK(relevant_alphabet(explore({P("tau.0")})).empty());
    CHECK(relevant_alphabet(explore({illustration_left()})) == ActionSet::first_n(2));
}

TEST_CASE("lts text format") {
    Alphabet al({"a"});
    std::string s = lts_to_text(explore({parse_process("a.0", al)}), al);
    CHECK(s == "#states 2\ns0: a.0\ns1: 0\ns0 -a-> s1\n");
    CHECK(lts_to_dot(explore({parse_process("a.0", al)}), al).find("digraph") == 0);
}

TEST_CASE("properties on generated terms") {
    Rng rng(3);
    for (int i = 0; i < 300; ++i) {
        GenConfig cfg;
        cfg.depth = 2 + i % 4;
        Term t = random_term(rng, cfg);
        auto ms = derive_transitions(t);
        Initials expect;
        for (const auto& m : ms) {
            if (m.label.is_visible()) expect.visible.insert(m.label.action());
            if (m.label.is_tau()) expect.tau = true;
        }
        CHECK(initials(t) == expect);
        // θ_Y idles on Q when Q has no initials in Y ∪ {τ}.
        ActionSet y = random_set(rng, 3);
        if (initials(t).blocked_by(y) && reachable_states(t, 300) != SIZE_MAX)
            CHECK(strong_bisim(theta(y, t), t).equivalent);
        // θ wrapper scan.
        ActionSet l = random_set(rng, 3), u = l | random_set(rng, 3);
        Term w = theta(l, u, t);
        for (const auto& m : derive_transitions(w)) {
            if (m.label.is_tau()) {
                CHECK(m.target->op == Op::Theta);
                CHECK(std::find(ms.begin(), ms.end(), Move{TAU, m.target->kids[0]}) != ms.end());
            } else {
                CHECK(std::find(ms.begin(), ms.end(), m) != ms.end());
            }
        }
    }
}

TEST_CASE("initials of a guarded context do not depend on its arguments") {
    // H[x] with x guarded: I(H[P]) = I(H[Q]).
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        GenConfig cfg;
        Term p = random_term(rng, cfg), q = random_term(rng, cfg);
        Context ctx = random_context(rng, cfg);
        Label l = random_label(rng, 3, true);
        Term hp = ctx(prefix(l, p)), hq = ctx(prefix(l, q));
        CHECK(initials(choice(hp, p)) == initials(choice(hq, p)));
        CHECK(initials(hp) == initials(hq));
    }
}

TEST_CASE("exploration stays within the unfolding measure") {
    Rng rng(9);
    for (int i = 0; i < 200; ++i) {
        GenConfig cfg;
        cfg.depth = 4;
        Term t = random_term(rng, cfg);
        // Successor sets are finite and computable with an unfolding budget of e(P).
        Semantics sem(unfolding_measure(t) + 1);
        CHECK_NOTHROW(sem.transitions(t));
    }
}

TEST_CASE("concurrent explorations share the interning table") {
    std::vector<Lts> results(4);
    std::vector<std::thread> workers;
    for (int w = 0; w < 4; ++w)
        workers.emplace_back([&results, w] {
            Rng rng(77);  // same seed: every worker builds the same terms
            GenConfig cfg;
            std::vector<Term> roots;
            for (int i = 0; i < 50; ++i) roots.push_back(random_term(rng, cfg));
            results[w] = explore(roots, 5000);
        });
    for (auto& t : workers) t.join();
    for (int w = 1; w < 4; ++w) {
        CHECK(results[w].states == results[0].states);
        CHECK(results[w].targets == results[0].targets);
    }
}
