#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "tocsp/equiv.hpp"

namespace tocsp {

class SideConditionViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Σ α_i.P_i; the empty list denotes 0.
struct HeadNormalForm {
    std::vector<Move> summands;

    Term as_term() const;
};

// One rewrite step. Positions are dot-separated child indices from the root
// ("" for the root itself).
struct RewriteStep {
    std::string axiom;
    std::string position;
    Term before;
    Term after;
};

struct RewriteTrace {
    std::vector<RewriteStep> steps;

    std::string to_text(const Alphabet& alpha) const;
};

// Head normal form, derived with the axiom tables plus RDP. The summands
// coincide with derive_transitions(p); this is checked before returning.
HeadNormalForm hnf(Term p, RewriteTrace* trace = nullptr);

// ψ_X applied to a head normal form.
HeadNormalForm psi_expand(ActionSet x, const HeadNormalForm& h);

// A group of environments over the relevant alphabet for which the ψ_X
// expansions of both sides are identical terms.
struct EnvClass {
    std::vector<ActionSet> members;
    std::string description;  // e.g. "{b∈X}", "{a∈X, b∉X}"
    Term psi_left = nullptr;
    Term psi_right = nullptr;
    bool equal = false;       // whether the two expansions are reactive bisimilar
};

struct EquationalVerdict {
    bool equivalent = false;
    ActionSet relevant;
    std::vector<EnvClass> classes;
    RewriteTrace trace;       // head normalisation of both sides
};

// Decides p ↔_r q for recursion-free p, q by induction on depth, matching
// summands directly and time-out summands under θ_X.
EquationalVerdict eq_recursion_free(Term p, Term q);

// Partition of Pow(relevant) by ψ-expansion of both sides (exposed for tests).
std::vector<EnvClass> environment_classes(const HeadNormalForm& hp, const HeadNormalForm& hq, ActionSet relevant,
                                          const Alphabet* alpha = nullptr);

// Laws. L0 is a.P + t.(Q + τ.R + a.S) = a.P + t.(Q + τ.R).
using LawValue = std::variant<Term, ActionSet, Action>;
using LawBinding = std::map<std::string, LawValue>;

struct LawInstance {
    std::string law;
    Term lhs;
    Term rhs;
    Relation relation;  // checker used for this law
};

const std::vector<std::string>& law_names();
// Parameter names and kinds ("term", "set", "action") for a law.
std::vector<std::pair<std::string, std::string>> law_parameters(const std::string& law);

// `universe` is the declared alphabet A (used by L3 and L3').
LawInstance instantiate_law(const std::string& law, const LawBinding& binding, ActionSet universe,
                            bool enforce_side_condition = true);
Verdict check_law(const std::string& law, const LawBinding& binding, ActionSet universe,
                  bool enforce_side_condition = true, const CheckOptions& opts = {});

bool theta_collapse_side_condition(ActionSet k, ActionSet v, ActionSet l, ActionSet u);
// Strong bisimilarity of θ_K^V(θ_L^U(p)) and θ_{K∪L}^{V∩U}(p).
Verdict theta_collapse_check(ActionSet k, ActionSet v, ActionSet l, ActionSet u, Term p,
                             bool enforce_side_condition = true, const CheckOptions& opts = {});

}  // namespace tocsp
