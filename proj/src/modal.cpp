#include "tocsp/modal.hpp"

#include <algorithm>
#include <functional>

#include "lexer.hpp"

namespace tocsp {

using detail::Tok;
using detail::TokenStream;

namespace {
Formula make(FormulaNode::Kind k, std::vector<Formula> parts, Label l = Label::tau(), ActionSet env = {}) {
    auto n = std::make_shared<FormulaNode>();
    n->kind = k;
    n->parts = std::move(parts);
    n->label = l;
    n->env = env;
    return n;
}
}  // namespace

Formula f_true() {
    static const Formula t = make(FormulaNode::Kind::Conj, {});
    return t;
}
Formula f_false() { return f_not(f_true()); }

Formula f_and(std::vector<Formula> parts) {
    if (parts.size() == 1) return parts[0];
    if (parts.empty()) return f_true();
    return make(FormulaNode::Kind::Conj, std::move(parts));
}

Formula f_not(Formula f) { return make(FormulaNode::Kind::Neg, {std::move(f)}); }

Formula f_diam(Label l, Formula f) {
    if (l.is_timeout()) throw std::invalid_argument("the time-out has no action modality; use <{X}>");
    return make(FormulaNode::Kind::DiamAct, {std::move(f)}, l);
}

Formula f_env(ActionSet x, Formula f) { return make(FormulaNode::Kind::DiamEnv, {std::move(f)}, Label::tau(), x); }

std::size_t modal_depth(const Formula& f) {
    std::size_t d = 0;
    for (const auto& p : f->parts) d = std::max(d, modal_depth(p));
    bool diamond = f->kind == FormulaNode::Kind::DiamAct || f->kind == FormulaNode::Kind::DiamEnv;
    return d + (diamond ? 1 : 0);
}

// ------------------------------------------------------------ parser
//   conj  := unary ('&&' unary)*
//   unary := '!' unary | '<' label '>' unary | '<' '{' acts '}' '>' unary | 'true' | 'false' | '(' conj ')'

namespace {

class FormulaParser {
public:
    FormulaParser(TokenStream& ts, const Alphabet& alpha) : ts_(ts), alpha_(alpha) {}

    Formula conj() {
        std::vector<Formula> parts{unary()};
        while (ts_.accept_punct("&&")) parts.push_back(unary());
        return f_and(std::move(parts));
    }

private:
    Formula unary() {
        if (ts_.accept_punct("!")) return f_not(unary());
        if (ts_.accept_punct("(")) {
            Formula f = conj();
            ts_.expect_punct(")");
            return f;
        }
        if (ts_.at_word("true")) {
            ts_.next();
            return f_true();
        }
        if (ts_.at_word("false")) {
            ts_.next();
            return f_false();
        }
        if (ts_.accept_punct("<")) {
            if (ts_.accept_punct("{")) {
                ActionSet x;
                if (!ts_.at_punct("}")) {
                    do x.insert(action());
                    while (ts_.accept_punct(","));
                }
                ts_.expect_punct("}");
                ts_.expect_punct(">");
                return f_env(x, unary());
            }
            auto tok = ts_.peek();
            std::string name = ts_.expect_ident("action, tau or {X}");
            Label l;
            if (name == "tau")
                l = Label::tau();
            else if (name == "t")
                ts_.fail_at(tok, "the time-out has no action modality; use <{X}>");
            else if (auto a = alpha_.find(name))
                l = Label::visible(*a);
            else
                ts_.fail_at(tok, "undeclared action '" + name + "'");
            ts_.expect_punct(">");
            return f_diam(l, unary());
        }
        ts_.fail("expected a formula");
    }

    Action action() {
        auto tok = ts_.peek();
        std::string name = ts_.expect_ident("action");
        if (auto a = alpha_.find(name)) return *a;
        ts_.fail_at(tok, "undeclared action '" + name + "'");
    }

    TokenStream& ts_;
    const Alphabet& alpha_;
};

void print_into(const Formula& f, const Alphabet& alpha, std::string& out, bool nested) {
    using K = FormulaNode::Kind;
    switch (f->kind) {
    case K::Conj:
        if (f->parts.empty()) {
            out += "true";
            return;
        }
        if (nested) out += '(';
        for (std::size_t i = 0; i < f->parts.size(); ++i) {
            if (i) out += " && ";
            print_into(f->parts[i], alpha, out, true);
        }
        if (nested) out += ')';
        return;
    case K::Neg:
        out += '!';
        print_into(f->parts[0], alpha, out, true);
        return;
    case K::DiamAct:
        out += "<" + alpha.label_name(f->label) + ">";
        print_into(f->parts[0], alpha, out, true);
        return;
    case K::DiamEnv:
        out += "<" + alpha.format(f->env) + ">";
        print_into(f->parts[0], alpha, out, true);
        return;
    }
}

}  // namespace

Formula parse_formula(std::string_view text, const Alphabet& alpha) {
    TokenStream ts(detail::tokenize(text));
    FormulaParser p(ts, alpha);
    Formula f = p.conj();
    if (!ts.at_end()) ts.fail("unexpected trailing input");
    return f;
}

std::string print(const Formula& f, const Alphabet& alpha) {
    std::string out;
    print_into(f, alpha, out, false);
    return out;
}

// ------------------------------------------------------------ evaluation

bool ModelChecker::sat(Term p, const Formula& f) {
    require_closed_valid(p);
    pinned_.push_back(f);
    return eval(p, nullptr, f);
}

bool ModelChecker::sat_env(Term p, ActionSet x, const Formula& f) {
    require_closed_valid(p);
    pinned_.push_back(f);
    return eval(p, &x, f);
}

bool ModelChecker::eval(Term p, const ActionSet* env, const Formula& f) {
    auto key = std::make_tuple(p->id, env != nullptr, env ? env->bits() : 0, f.get());
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    using K = FormulaNode::Kind;
    const Initials& init = sem_.initials(p);
    bool result = false;
    if (!env) {
        switch (f->kind) {
        case K::Conj:
            result = std::all_of(f->parts.begin(), f->parts.end(), [&](const Formula& g) { return eval(p, nullptr, g); });
            break;
        case K::Neg: result = !eval(p, nullptr, f->parts[0]); break;
        case K::DiamAct:
            for (const auto& m : sem_.transitions(p))
                if (m.label == f->label && eval(m.target, nullptr, f->parts[0])) {
                    result = true;
                    break;
                }
            break;
        case K::DiamEnv:
            if (init.blocked_by(f->env))
                for (const auto& m : sem_.transitions(p))
                    if (m.label.is_timeout() && eval(m.target, &f->env, f->parts[0])) {
                        result = true;
                        break;
                    }
            break;
        }
    } else {
        ActionSet x = *env;
        switch (f->kind) {
        case K::Conj:
            result = std::all_of(f->parts.begin(), f->parts.end(), [&](const Formula& g) { return eval(p, env, g); });
            break;
        case K::Neg: result = !eval(p, env, f->parts[0]); break;
        case K::DiamAct:
            if (f->label.is_tau() || x.contains(f->label.action()))
                for (const auto& m : sem_.transitions(p))
                    if (m.label == f->label && eval(m.target, f->label.is_tau() ? env : nullptr, f->parts[0])) {
                        result = true;
                        break;
                    }
            break;
        case K::DiamEnv: break;  // only the idling clause below applies
        }
        // Idling clause: an environment-blocked process may see its environment change.
        if (!result && init.blocked_by(x)) result = eval(p, nullptr, f);
    }
    memo_.emplace(key, result);
    return result;
}

bool sat(Term p, const Formula& f) {
    ModelChecker mc;
    return mc.sat(p, f);
}

bool sat_env(Term p, ActionSet x, const Formula& f) {
    ModelChecker mc;
    return mc.sat_env(p, x, f);
}

}  // namespace tocsp
