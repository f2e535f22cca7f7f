#include "tocsp/sos.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "tocsp/syntax.hpp"

namespace tocsp {

void Semantics::clear() {
    init_.clear();
    trans_.clear();
}

const Initials& Semantics::initials(Term t) { return initials_at(t, 0); }
const std::vector<Move>& Semantics::transitions(Term t) { return transitions_at(t, 0); }

const Initials& Semantics::initials_at(Term t, std::uint32_t unfolds) {
    if (auto it = init_.find(t); it != init_.end()) return it->second;
    Initials out;
    switch (t->op) {
    case Op::Nil: break;
    case Op::Prefix:
        if (t->label.is_visible())
            out.visible.insert(t->label.action());
        else if (t->label.is_tau())
            out.tau = true;
        break;
    case Op::Choice: {
        const Initials l = initials_at(t->kids[0], unfolds);
        const Initials& r = initials_at(t->kids[1], unfolds);
        out.visible = l.visible | r.visible;
        out.tau = l.tau || r.tau;
        break;
    }
    case Op::Par: {
        const Initials l = initials_at(t->kids[0], unfolds);
        const Initials& r = initials_at(t->kids[1], unfolds);
        ActionSet s = t->set;
        out.visible = (l.visible - s) | (r.visible - s) | (l.visible & r.visible & s);
        out.tau = l.tau || r.tau;
        break;
    }
    case Op::Hide: {
        const Initials& x = initials_at(t->kids[0], unfolds);
        out.visible = x.visible - t->set;
        out.tau = x.tau || x.visible.intersects(t->set);
        break;
    }
    case Op::Rename: {
        const Initials& x = initials_at(t->kids[0], unfolds);
        out.tau = x.tau;
        for (auto [a, b] : t->pairs)
            if (x.visible.contains(a)) out.visible.insert(b);
        break;
    }
    case Op::Theta: {
        const Initials& x = initials_at(t->kids[0], unfolds);
        out.tau = x.tau;
        out.visible = x.blocked_by(t->set) ? x.visible : (x.visible & t->upper);
        break;
    }
    case Op::Psi: out = initials_at(t->kids[0], unfolds); break;
    case Op::Rec:
        if (unfolds >= budget_)
            throw BudgetExceeded("recursion did not reach a prefix within " + std::to_string(budget_) +
                                 " unfoldings (unguarded recursion?)");
        out = initials_at(unfold(t), unfolds + 1);
        break;
    case Op::Var:
    case Op::BVar: throw InvalidTerm("initials of an open term");
    }
    return init_.emplace(t, out).first->second;
}

const std::vector<Move>& Semantics::transitions_at(Term t, std::uint32_t unfolds) {
    if (auto it = trans_.find(t); it != trans_.end()) return it->second;
    std::vector<Move> out;
    switch (t->op) {
    case Op::Nil: break;
    case Op::Prefix: out.push_back({t->label, t->kids[0]}); break;
    case Op::Choice: {
        out = transitions_at(t->kids[0], unfolds);
        const auto& r = transitions_at(t->kids[1], unfolds);
        out.insert(out.end(), r.begin(), r.end());
        break;
    }
    case Op::Par: {
        Term l = t->kids[0], r = t->kids[1];
        ActionSet s = t->set;
        const auto lm = transitions_at(l, unfolds);
        const auto& rm = transitions_at(r, unfolds);
        auto synced = [&](Label a) { return a.is_visible() && s.contains(a.action()); };
        for (const auto& m : lm)
            if (!synced(m.label)) out.push_back({m.label, par(s, m.target, r)});
        for (const auto& m : rm)
            if (!synced(m.label)) out.push_back({m.label, par(s, l, m.target)});
        for (const auto& ml : lm) {
            if (!synced(ml.label)) continue;
            for (const auto& mr : rm)
                if (mr.label == ml.label) out.push_back({ml.label, par(s, ml.target, mr.target)});
        }
        break;
    }
    case Op::Hide:
        for (const auto& m : transitions_at(t->kids[0], unfolds)) {
            bool hidden = m.label.is_visible() && t->set.contains(m.label.action());
            out.push_back({hidden ? Label::tau() : m.label, hide(t->set, m.target)});
        }
        break;
    case Op::Rename:
        for (const auto& m : transitions_at(t->kids[0], unfolds)) {
            Term next = rename(t->pairs, m.target);
            if (!m.label.is_visible()) {
                out.push_back({m.label, next});
                continue;
            }
            for (auto [a, b] : t->pairs)
                if (a == m.label.action()) out.push_back({Label::visible(b), next});
        }
        break;
    case Op::Theta: {
        Term x = t->kids[0];
        bool idle = initials_at(x, unfolds).blocked_by(t->set);
        for (const auto& m : transitions_at(x, unfolds)) {
            if (m.label.is_tau())
                out.push_back({m.label, theta(t->set, t->upper, m.target)});
            else if (idle || (m.label.is_visible() && t->upper.contains(m.label.action())))
                out.push_back(m);
        }
        break;
    }
    case Op::Psi: {
        Term x = t->kids[0];
        bool idle = initials_at(x, unfolds).blocked_by(t->set);
        for (const auto& m : transitions_at(x, unfolds)) {
            if (!m.label.is_timeout())
                out.push_back(m);
            else if (idle)
                out.push_back({m.label, theta(t->set, t->set, m.target)});
        }
        break;
    }
    case Op::Rec:
        if (unfolds >= budget_)
            throw BudgetExceeded("recursion did not reach a prefix within " + std::to_string(budget_) +
                                 " unfoldings (unguarded recursion?)");
        out = transitions_at(unfold(t), unfolds + 1);
        break;
    case Op::Var:
    case Op::BVar: throw InvalidTerm("transitions of an open term");
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return trans_.emplace(t, std::move(out)).first->second;
}

Semantics& default_semantics() {
    thread_local Semantics sem;
    return sem;
}

void require_closed_valid(Term t) {
    if (!t->closed()) throw InvalidTerm("term has free variables");
    if (!t->valid) throw InvalidTerm("term is not valid: a theta or psi argument refers to an enclosing rec variable");
}

Initials initials(Term t) {
    require_closed_valid(t);
    return default_semantics().initials(t);
}

std::vector<Move> derive_transitions(Term t) {
    require_closed_valid(t);
    return default_semantics().transitions(t);
}

std::uint32_t Lts::find(Term t) const {
    for (std::uint32_t i = 0; i < states.size(); ++i)
        if (states[i] == t) return i;
    return UINT32_MAX;
}

Lts explore(const std::vector<Term>& roots, std::size_t max_states, Semantics* sem) {
    Semantics& s = sem ? *sem : default_semantics();
    Lts lts;
    std::unordered_map<Term, std::uint32_t> index;
    auto add = [&](Term t) -> std::uint32_t {
        auto [it, fresh] = index.emplace(t, static_cast<std::uint32_t>(lts.states.size()));
        if (fresh) lts.states.push_back(t);
        return it->second;
    };
    for (Term r : roots) {
        require_closed_valid(r);
        auto i = add(r);
        lts.roots.push_back(i);
    }
    lts.offsets.push_back(0);
    for (std::uint32_t i = 0; i < lts.states.size(); ++i) {
        if (lts.states.size() > max_states) {
            lts.complete = false;
            break;
        }
        for (const auto& m : s.transitions(lts.states[i])) {
            lts.labels.push_back(m.label);
            lts.targets.push_back(add(m.target));
        }
        lts.offsets.push_back(static_cast<std::uint32_t>(lts.targets.size()));
    }
    if (lts.states.size() > max_states) lts.complete = false;
    if (!lts.complete) {
        // Drop unexpanded states so every stored transition stays in range.
        std::size_t expanded = lts.offsets.size() - 1;
        std::vector<Label> labels;
        std::vector<std::uint32_t> targets;
        std::vector<std::uint32_t> offsets{0};
        for (std::uint32_t i = 0; i < expanded; ++i) {
            for (auto k = lts.offsets[i]; k < lts.offsets[i + 1]; ++k)
                if (lts.targets[k] < expanded) {
                    labels.push_back(lts.labels[k]);
                    targets.push_back(lts.targets[k]);
                }
            offsets.push_back(static_cast<std::uint32_t>(targets.size()));
        }
        lts.states.resize(expanded);
        lts.labels = std::move(labels);
        lts.targets = std::move(targets);
        lts.offsets = std::move(offsets);
    }
    return lts;
}

ActionSet relevant_alphabet(const Lts& lts) {
    ActionSet out;
    for (Label l : lts.labels)
        if (l.is_visible()) out.insert(l.action());
    return out;
}

std::string lts_to_text(const Lts& lts, const Alphabet& alpha) {
    std::ostringstream os;
    os << "#states " << lts.size() << "\n";
    for (std::uint32_t i = 0; i < lts.size(); ++i) os << "s" << i << ": " << print(lts.states[i], alpha) << "\n";
    for (std::uint32_t i = 0; i < lts.size(); ++i)
        for (auto k = lts.begin(i); k < lts.end(i); ++k)
            os << "s" << i << " -" << alpha.label_name(lts.labels[k]) << "-> s" << lts.targets[k] << "\n";
    if (!lts.complete) os << "#incomplete\n";
    return os.str();
}

std::string lts_to_dot(const Lts& lts, const Alphabet& alpha) {
    std::ostringstream os;
    os << "digraph lts {\n  node [shape=circle];\n";
    for (std::uint32_t i = 0; i < lts.size(); ++i) {
        std::string label = print(lts.states[i], alpha);
        std::string escaped;
        for (char c : label) {
            if (c == '"' || c == '\\') escaped += '\\';
            escaped += c;
        }
        bool root = std::find(lts.roots.begin(), lts.roots.end(), i) != lts.roots.end();
        os << "  s" << i << " [tooltip=\"" << escaped << "\"" << (root ? ", shape=doublecircle" : "") << "];\n";
    }
    for (std::uint32_t i = 0; i < lts.size(); ++i)
        for (auto k = lts.begin(i); k < lts.end(i); ++k)
            os << "  s" << i << " -> s" << lts.targets[k] << " [label=\"" << alpha.label_name(lts.labels[k])
               << "\"];\n";
    os << "}\n";
    return os.str();
}

}  // namespace tocsp
