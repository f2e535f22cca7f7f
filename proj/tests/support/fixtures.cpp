#include "fixtures.hpp"

namespace tocsp::testing {

namespace {
const Label A = Label::visible(0), B = Label::visible(1), TAU = Label::tau(), T = Label::timeout();
}

const Alphabet& ab() {
    static const Alphabet alpha({"a", "b"});
    return alpha;
}

Term illustration_left() {
    return sum({prefix(B, nil()), prefix(T, choice(prefix(A, nil()), prefix(TAU, choice(prefix(B, nil()), prefix(A, nil()))))),
                prefix(T, prefix(TAU, prefix(A, nil())))});
}

Term illustration_right() {
    return sum({prefix(B, nil()), prefix(T, choice(prefix(A, nil()), prefix(TAU, prefix(A, nil())))),
                prefix(T, prefix(TAU, choice(prefix(B, nil()), prefix(A, nil()))))});
}

std::vector<std::string> illustration_positive_literal() {
    return {"<{a,b}><tau><b>true", "<{a,b}><tau>!<b>true", "<{b}><a>true", "<{b}>!<a>true"};
}
std::vector<std::string> illustration_negative_literal() {
    return {"<{a,b}>(<a>true && <tau><b>true)", "<{b}>(<a>true && <tau><b>true)"};
}
// Each environment set replaced by its complement within {a, b}.
std::vector<std::string> illustration_positive_complement() {
    return {"<{}><tau><b>true", "<{}><tau>!<b>true", "<{a}><a>true", "<{a}>!<a>true"};
}
std::vector<std::string> illustration_negative_complement() {
    return {"<{}>(<a>true && <tau><b>true)", "<{a}>(<a>true && <tau><b>true)"};
}

Term branching_family(int units, unsigned dashed) {
    Term next = nil();
    for (int k = units - 1; k >= 0; --k) {
        bool dash = (dashed >> k) & 1u;
        Term m = prefix(TAU, next);
        Term u2 = dash ? choice(prefix(A, nil()), prefix(B, nil())) : prefix(A, nil());
        Term d2 = dash ? prefix(A, nil()) : choice(prefix(A, nil()), prefix(B, nil()));
        Term u1 = choice(prefix(TAU, u2), prefix(TAU, m));
        Term d1 = sum({prefix(A, nil()), prefix(TAU, d2), prefix(TAU, m)});
        next = choice(prefix(TAU, u1), prefix(TAU, d1));
    }
    return choice(prefix(B, nil()), prefix(T, next));
}

}  // namespace tocsp::testing
