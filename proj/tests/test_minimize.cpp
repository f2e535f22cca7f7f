#include <doctest.h>

#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "tocsp/minimize.hpp"
#include "tocsp/syntax.hpp"

using namespace tocsp;
using namespace tocsp::testing;

namespace {
Term P(const std::string& s) { return parse_process(s, ab()); }
}  // namespace

TEST_CASE("reactive partition") {
    Lts l = explore({P("a.0"), P("a.0 + a.0"), nil()});
    // a.0 + a.0 is a distinct state from a.0 but lands in the same block.
    Partition part = reactive_partition(l);
    CHECK(part.blocks == 2);
    CHECK(part.block_of[l.roots[0]] == part.block_of[l.roots[1]]);
    CHECK(part.block_of[l.roots[0]] != part.block_of[l.roots[2]]);

    Lts il = explore({illustration_left(), illustration_right()});
    Partition pi = reactive_partition(il);
    CHECK(pi.block_of[il.roots[0]] == pi.block_of[il.roots[1]]);

    Lts tt = explore({P("t.a.0"), P("t.b.0")});
    Partition pt = reactive_partition(tt);
    CHECK(pt.block_of[tt.roots[0]] != pt.block_of[tt.roots[1]]);
    CHECK_FALSE(brute_force_gsrb(P("t.a.0"), P("t.b.0")).equivalent);
}

TEST_CASE("quotient") {
    Lts one = explore({nil()});
    CanonicalLts q = quotient(one, reactive_partition(one));
    CHECK(q.size() == 1);
    CHECK(q.transitions[0].empty());

    Term p = P("a.0 + t.a.0 + t.(a.0 + tau.b.0)");
    CanonicalLts c = minimize({p});
    Term spec = to_recspec(c, c.root_classes[0]);
    CHECK(reactive_bisim(spec, p).equivalent);
    // Transitions are read off the representative only.
    for (std::size_t k = 0; k < c.size(); ++k) {
        std::set<std::pair<Label, std::uint32_t>> from_chi;
        Lts l = explore({p});
        std::uint32_t chi = c.representative[k];
        for (auto i = l.begin(chi); i < l.end(chi); ++i) from_chi.emplace(l.labels[i], c.class_of[l.targets[i]]);
        CHECK(from_chi.size() == c.transitions[k].size());
    }
}

TEST_CASE("re-encoding as a recursive specification") {
    Alphabet al({"a"});
    Term loop = parse_process("rec x { x = a.x }", al);
    CanonicalLts c = minimize({loop});
    CHECK(print(to_recspec(c, 0), al) == "rec x { x = a.x } @ x");
    CanonicalLts d = minimize({parse_process("a.0", al)});
    CHECK(print(to_recspec(d, d.root_classes[0]), al) == "rec x { x = a.y; y = 0 } @ x");
    Rng rng(14);
    for (int i = 0; i < 60; ++i) {
        Term p = random_lts_term(rng, 4, 2);
        CanonicalLts m = minimize({p});
        Term spec = to_recspec(m, m.root_classes[0]);
        CHECK(is_guarded(spec));
        // The re-encoding is already minimal and has the quotient's shape.
        Lts sl = explore({spec});
        CHECK(sl.size() == m.size());
        CHECK(reactive_partition(sl).blocks == m.size());
        CanonicalLts again = minimize({spec});
        CHECK(rooted_isomorphic(m, m.root_classes[0], again, again.root_classes[0]));
        CHECK(strong_bisim(spec, to_recspec(again, again.root_classes[0])).equivalent);
    }
}

TEST_CASE("isomorphism") {
    CanonicalLts a = minimize({P("a.b.0 + b.0")});
    CanonicalLts b = minimize({P("b.0 + a.b.0")});
    CHECK(rooted_isomorphic(a, a.root_classes[0], b, b.root_classes[0]));
    CanonicalLts c = minimize({P("a.a.0 + b.0")});
    CHECK_FALSE(rooted_isomorphic(a, a.root_classes[0], c, c.root_classes[0]));
}

TEST_CASE("branching family truncations collapse") {
    for (int units = 1; units <= 2; ++units) {
        std::vector<Term> roots;
        for (unsigned m = 0; m < (1u << units); ++m) roots.push_back(branching_family(units, m));
        for (std::size_t i = 1; i < roots.size(); ++i) CHECK(reactive_bisim(roots[0], roots[i]).equivalent);
        CanonicalLts joint = minimize(roots);
        for (auto r : joint.root_classes) CHECK(r == joint.root_classes[0]);
    }
}
