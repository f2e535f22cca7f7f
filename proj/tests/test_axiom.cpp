#include <doctest.h>

#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "tocsp/axiom.hpp"
#include "tocsp/syntax.hpp"

using namespace tocsp;
using namespace tocsp::testing;

namespace {
const Alphabet& abc() {
    static const Alphabet a({"a", "b", "c"});
    return a;
}
Term P(const std::string& s) { return parse_process(s, abc()); }
const Label a = Label::visible(0), b = Label::visible(1), TAU = Label::tau(), T = Label::timeout();
HeadNormalForm H(std::vector<Move> ms) { return HeadNormalForm{std::move(ms)}; }
}  // namespace

TEST_CASE("head normal forms") {
    CHECK(hnf(nil()).summands.empty());
    CHECK(hnf(P("theta{}{}(a.0 + t.b.0)")).as_term() == P("a.0 + t.b.0"));
    auto h = hnf(P("a.0 |[]| b.0"));
    REQUIRE(h.summands.size() == 2);
    CHECK(h.summands[0] == Move{a, P("0 |[]| b.0")});
    CHECK(h.summands[1] == Move{b, P("a.0 |[]| 0")});
    RewriteTrace tr;
    hnf(P("hide {a} in (a.b.0 || t.a.0)"), &tr);
    REQUIRE_FALSE(tr.steps.empty());
    CHECK(tr.steps.front().axiom == "EXP");
    bool saw_h3 = false;
    for (const auto& s : tr.steps) saw_h3 = saw_h3 || s.axiom == "H3";
    CHECK(saw_h3);
    CHECK_THROWS_AS(hnf(P("rec x { x = x + a.0 }")), InvalidTerm);
}

TEST_CASE("rewrite steps are sound") {
    Rng rng(31);
    int steps = 0;
    for (int i = 0; i < 150; ++i) {
        GenConfig cfg;
        cfg.depth = 3;
        Term t = random_term(rng, cfg);
        if (reachable_states(t, 200) == SIZE_MAX) continue;
        RewriteTrace tr;
        HeadNormalForm h = hnf(t, &tr);
        CHECK(strong_bisim(h.as_term(), t).equivalent);
        for (const auto& s : tr.steps) {
            if (reachable_states(s.before, 200) == SIZE_MAX || reachable_states(s.after, 200) == SIZE_MAX) continue;
            INFO(s.axiom);
            INFO(print(s.before, abc()));
            CHECK(strong_bisim(s.before, s.after).equivalent);
            ++steps;
        }
    }
    CHECK(steps > 100);
}

TEST_CASE("psi expansion") {
    CHECK(psi_expand(ActionSet::single(0), H({{TAU, nil()}, {T, P("b.0")}})).summands == std::vector<Move>{{TAU, nil()}});
    CHECK(psi_expand(ActionSet{}, H({{T, P("a.0")}})).summands == std::vector<Move>{{T, theta(ActionSet{}, P("a.0"))}});
    CHECK(psi_expand(ActionSet::single(0), H({{a, nil()}})).summands == std::vector<Move>{{a, nil()}});
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        GenConfig cfg;
        Term t = random_term(rng, cfg);
        ActionSet x = random_set(rng, 3);
        CHECK(derive_transitions(psi(x, t)) == derive_transitions(psi_expand(x, hnf(t)).as_term()));
    }
}

TEST_CASE("recursion-free decision") {
    auto l2 = eq_recursion_free(P("tau.0 + t.b.0"), P("tau.0"));
    CHECK(l2.equivalent);
    CHECK(l2.relevant == ActionSet::single(1));
    // The τ-summand makes both expansions independent of X.
    CHECK(l2.classes.size() == 1);
    auto il = eq_recursion_free(illustration_left(), illustration_right());
    CHECK(il.equivalent);
    REQUIRE(il.classes.size() == 3);
    auto cls = environment_classes(hnf(illustration_left()), hnf(illustration_right()), il.relevant, &ab());
    CHECK(cls[0].description == "{b∈X}");
    CHECK(cls[1].description == "{a∈X, b∉X}");
    CHECK(cls[2].description == "{a,b∉X}");
    CHECK_FALSE(eq_recursion_free(P("a.0"), P("b.0")).equivalent);
    CHECK_THROWS_AS(eq_recursion_free(P("rec x { x = a.x }"), P("a.0")), InvalidTerm);
}

TEST_CASE("environment classes partition the relevant subsets") {
    Rng rng(6);
    for (int i = 0; i < 100; ++i) {
        GenConfig cfg;
        cfg.recursion = false;
        Term p = random_recfree(rng, cfg), q = random_recfree(rng, cfg);
        ActionSet j = relevant_alphabet(explore({p, q}));
        auto hp = hnf(p), hq = hnf(q);
        auto cls = environment_classes(hp, hq, j);
        std::set<std::uint64_t> seen;
        for (const auto& c : cls) {
            CHECK_FALSE(c.members.empty());
            for (ActionSet x : c.members) {
                CHECK(seen.insert(x.bits()).second);
                CHECK(psi_expand(x, hp).as_term() == c.psi_left);
                CHECK(psi_expand(x, hq).as_term() == c.psi_right);
            }
        }
        CHECK(seen.size() == j.subsets().size());
    }
}

TEST_CASE("laws") {
    ActionSet universe = abc().all();
    auto term = [](const std::string& s) { return LawValue{P(s)}; };
    CHECK(check_law("L2", {{"P", term("0")}, {"Q", term("a.0")}}, universe).equivalent);
    CHECK(check_law("L0", {{"a", LawValue{Action{0}}}, {"P", term("0")}, {"Q", term("c.0")}, {"R", term("b.0")},
                           {"S", term("a.0")}},
                    universe)
              .equivalent);
    CHECK(check_law("L3'", {{"a", LawValue{Action{0}}}, {"x", term("0")}, {"y", term("a.0 + b.0")}}, universe)
              .equivalent);
    CHECK(check_law("L3", {{"x", term("a.0 + b.0")}, {"y", term("a.0 + c.0 + t.b.0")}}, universe).equivalent);
    CHECK_THROWS_AS(instantiate_law("L3", {{"x", term("tau.0")}, {"y", term("0")}}, universe), SideConditionViolation);
    CHECK_THROWS_AS(law_parameters("L9"), std::invalid_argument);
    CHECK_THROWS_AS(check_law("L2", {{"P", term("0")}}, universe), std::invalid_argument);
}

TEST_CASE("theta collapse side condition") {
    ActionSet c = ActionSet::single(2), ac = ActionSet::single(0) | c, none;
    Term x = P("a.0 + c.0");
    CHECK_FALSE(theta_collapse_side_condition(c, ac, none, c));
    CHECK_THROWS_AS(theta_collapse_check(c, ac, none, c, x), SideConditionViolation);
    auto v = theta_collapse_check(c, ac, none, c, x, false);
    CHECK_FALSE(v.equivalent);
    // θ_{c}^{a,c}(θ_∅^{c}(x)) can do a; θ_{c}^{c}(x) cannot.
    auto lhs = derive_transitions(theta(c, ac, theta(none, c, x)));
    auto rhs = derive_transitions(theta(c, c, x));
    CHECK(std::any_of(lhs.begin(), lhs.end(), [](const Move& m) { return m.label == Label::visible(0); }));
    CHECK(std::none_of(rhs.begin(), rhs.end(), [](const Move& m) { return m.label == Label::visible(0); }));

    Rng rng(12);
    for (int i = 0; i < 100; ++i) {
        GenConfig cfg;
        Term r = random_term(rng, cfg);
        if (reachable_states(r, 200) == SIZE_MAX) continue;
        ActionSet xs = random_set(rng, 3);
        CHECK(theta_collapse_check(xs, xs, xs, xs, r).equivalent);
    }
    CHECK(theta_collapse_check(none, abc().all(), none, abc().all(), x).equivalent);
}
