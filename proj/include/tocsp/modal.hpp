#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "tocsp/sos.hpp"

namespace tocsp {

struct FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

// ⋀ φ_i | ¬φ | ⟨α⟩φ with α ∈ A ∪ {τ} | ⟨X⟩φ.
struct FormulaNode {
    enum class Kind { Conj, Neg, DiamAct, DiamEnv };
    Kind kind;
    std::vector<Formula> parts;  // Conj: conjuncts; otherwise the single operand
    Label label;                 // DiamAct, never the time-out
    ActionSet env;               // DiamEnv
};

Formula f_true();
Formula f_false();
Formula f_and(std::vector<Formula> parts);
Formula f_not(Formula f);
Formula f_diam(Label l, Formula f);  // throws for the time-out label
Formula f_env(ActionSet x, Formula f);

Formula parse_formula(std::string_view text, const Alphabet& alpha);
std::string print(const Formula& f, const Alphabet& alpha);
std::size_t modal_depth(const Formula& f);

// Evaluates ⊨ and ⊨_X by direct recursion, memoized per (state, environment, formula).
class ModelChecker {
public:
    explicit ModelChecker(Semantics* sem = nullptr) : sem_(sem ? *sem : default_semantics()) {}

    bool sat(Term p, const Formula& f);
    bool sat_env(Term p, ActionSet x, const Formula& f);

private:
    bool eval(Term p, const ActionSet* env, const Formula& f);

    Semantics& sem_;
    std::vector<Formula> pinned_;  // keeps memo keys alive
    std::map<std::tuple<std::uint64_t, bool, std::uint64_t, const FormulaNode*>, bool> memo_;
};

bool sat(Term p, const Formula& f);
bool sat_env(Term p, ActionSet x, const Formula& f);

}  // namespace tocsp
