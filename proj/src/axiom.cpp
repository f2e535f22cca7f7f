#include "tocsp/axiom.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "tocsp/syntax.hpp"

namespace tocsp {

namespace {

Term sum_of(const std::vector<Move>& ms) {
    std::vector<Term> parts;
    parts.reserve(ms.size());
    for (const auto& m : ms) parts.push_back(prefix(m.label, m.target));
    return sum(parts);
}

std::vector<Move> normalised(std::vector<Move> ms) {
    std::sort(ms.begin(), ms.end());
    ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
    return ms;
}

std::string child(const std::string& pos, int i) { return pos.empty() ? std::to_string(i) : pos + "." + std::to_string(i); }

class Normaliser {
public:
    Normaliser(RewriteTrace* trace, std::uint32_t budget) : trace_(trace), budget_(budget) {}

    std::vector<Move> go(Term t, const std::string& pos) {
        switch (t->op) {
        case Op::Nil: return {};
        case Op::Prefix: return {{t->label, t->kids[0]}};
        case Op::Choice: {
            auto l = go(t->kids[0], child(pos, 0));
            auto r = go(t->kids[1], child(pos, 1));
            std::vector<Move> all(l);
            all.insert(all.end(), r.begin(), r.end());
            auto out = normalised(all);
            step("A1-A4", pos, choice(sum_of(l), sum_of(r)), sum_of(out));
            return out;
        }
        case Op::Par: return par_case(t, pos);
        case Op::Hide: return hide_case(t, pos);
        case Op::Rename: return rename_case(t, pos);
        case Op::Theta: return theta_case(t, pos);
        case Op::Psi: return psi_case(t, pos);
        case Op::Rec: {
            if (budget_ == 0) throw InvalidTerm("head normalisation needed more unfoldings than the guardedness measure allows");
            --budget_;
            Term u = unfold(t);
            step("RDP", pos, t, u);
            auto out = go(u, pos);
            ++budget_;
            return out;
        }
        case Op::Var:
        case Op::BVar: throw InvalidTerm("head normal form of an open term");
        }
        return {};
    }

private:
    void step(const char* axiom, const std::string& pos, Term before, Term after) {
        if (trace_ && before != after) trace_->steps.push_back({axiom, pos, before, after});
    }

    std::vector<Move> finish(const std::string& pos, Term before, std::vector<Move> ms) {
        auto out = normalised(ms);
        step("A1-A4", pos, before, sum_of(out));
        return out;
    }

    std::vector<Move> par_case(Term t, const std::string& pos) {
        Term x = t->kids[0], y = t->kids[1];
        ActionSet s = t->set;
        auto hx = go(x, child(pos, 0));
        auto hy = go(y, child(pos, 1));
        Term sx = sum_of(hx), sy = sum_of(hy);
        auto synced = [&](Label a) { return a.is_visible() && s.contains(a.action()); };
        // Expansion law on the head normal forms, then the residuals are
        // written back with the original operands (the sub-derivations read right to left).
        std::vector<Move> exp, back;
        for (const auto& m : hx)
            if (!synced(m.label)) {
                exp.push_back({m.label, par(s, m.target, sy)});
                back.push_back({m.label, par(s, m.target, y)});
            }
        for (const auto& m : hy)
            if (!synced(m.label)) {
                exp.push_back({m.label, par(s, sx, m.target)});
                back.push_back({m.label, par(s, x, m.target)});
            }
        for (const auto& ml : hx)
            if (synced(ml.label))
                for (const auto& mr : hy)
                    if (mr.label == ml.label) {
                        exp.push_back({ml.label, par(s, ml.target, mr.target)});
                        back.push_back({ml.label, par(s, ml.target, mr.target)});
                    }
        step("EXP", pos, par(s, sx, sy), sum_of(exp));
        step("CONG", pos, sum_of(exp), sum_of(back));
        return finish(pos, sum_of(back), back);
    }

    std::vector<Move> hide_case(Term t, const std::string& pos) {
        ActionSet hidden = t->set;
        auto h = go(t->kids[0], child(pos, 0));
        distribute("H1", "H0", pos, [&](Term u) { return tocsp::hide(hidden, u); }, h);
        std::vector<Move> out;
        for (const auto& m : h) {
            bool in = m.label.is_visible() && hidden.contains(m.label.action());
            Move r{in ? Label::tau() : m.label, tocsp::hide(hidden, m.target)};
            step(in ? "H3" : "H2", pos, tocsp::hide(hidden, prefix(m.label, m.target)), prefix(r.label, r.target));
            out.push_back(r);
        }
        return finish(pos, sum_of(out), out);
    }

    std::vector<Move> rename_case(Term t, const std::string& pos) {
        const RenamePairs& pairs = t->pairs;
        auto h = go(t->kids[0], child(pos, 0));
        distribute("R1", "R0", pos, [&](Term u) { return tocsp::rename(pairs, u); }, h);
        std::vector<Move> out;
        for (const auto& m : h) {
            Term next = tocsp::rename(pairs, m.target);
            std::vector<Move> here;
            if (!m.label.is_visible()) {
                here.push_back({m.label, next});
            } else {
                for (auto [a, b] : pairs)
                    if (a == m.label.action()) here.push_back({Label::visible(b), next});
            }
            const char* ax = m.label.is_tau() ? "R2" : m.label.is_timeout() ? "R3" : "R4";
            step(ax, pos, tocsp::rename(pairs, prefix(m.label, m.target)), sum_of(here));
            out.insert(out.end(), here.begin(), here.end());
        }
        return finish(pos, sum_of(out), out);
    }

    // op(Σ α_i.x_i) = Σ op(α_i.x_i), or op(0) = 0.
    template <class Wrap>
    void distribute(const char* name, const char* zero_name, const std::string& pos, Wrap wrap,
                    const std::vector<Move>& h) {
        if (h.empty()) {
            step(zero_name, pos, wrap(nil()), nil());
            return;
        }
        std::vector<Term> parts;
        for (const auto& m : h) parts.push_back(wrap(prefix(m.label, m.target)));
        step(name, pos, wrap(sum_of(h)), sum(parts));
    }

    std::vector<Move> theta_case(Term t, const std::string& pos) {
        ActionSet lower = t->set, upper = t->upper;
        auto h = go(t->kids[0], child(pos, 0));
        auto th = [&](Term u) { return tocsp::theta(lower, upper, u); };
        auto in_l_tau = [&](Label l) { return l.is_tau() || (l.is_visible() && lower.contains(l.action())); };
        auto in_u_tau = [&](Label l) { return l.is_tau() || (l.is_visible() && upper.contains(l.action())); };
        auto anchor = std::find_if(h.begin(), h.end(), [&](const Move& m) { return in_l_tau(m.label); });
        if (anchor == h.end()) {
            step("T1", pos, th(sum_of(h)), sum_of(h));
            return h;
        }
        // Peel every non-anchor summand off: dropped (T2) or split out (T3).
        Move a = *anchor;
        std::vector<Move> rest(h);
        std::vector<Move> split;
        for (const auto& m : h) {
            if (m == a) continue;
            std::vector<Move> next;
            for (const auto& r : rest)
                if (!(r == m)) next.push_back(r);
            if (in_u_tau(m.label)) {
                step("T3", pos, th(sum_of(rest)), choice(th(sum_of(next)), th(prefix(m.label, m.target))));
                split.push_back(m);
            } else {
                step("T2", pos, th(sum_of(rest)), th(sum_of(next)));
            }
            rest = std::move(next);
        }
        split.insert(split.begin(), a);
        std::vector<Move> out;
        for (const auto& m : split) {
            if (m.label.is_tau()) {
                step("T5", pos, th(prefix(m.label, m.target)), prefix(m.label, th(m.target)));
                out.push_back({m.label, th(m.target)});
            } else {
                step("T4", pos, th(prefix(m.label, m.target)), prefix(m.label, m.target));
                out.push_back(m);
            }
        }
        return finish(pos, sum_of(out), out);
    }

    std::vector<Move> psi_case(Term t, const std::string& pos) {
        ActionSet x = t->set;
        auto h = go(t->kids[0], child(pos, 0));
        auto ps = [&](Term u) { return tocsp::psi(x, u); };
        auto in_x_tau = [&](Label l) { return l.is_tau() || (l.is_visible() && x.contains(l.action())); };
        auto anchor = std::find_if(h.begin(), h.end(), [&](const Move& m) { return in_x_tau(m.label); });
        std::vector<Move> rest(h), out;
        auto remove = [&](const Move& m) {
            std::vector<Move> next;
            for (const auto& r : rest)
                if (!(r == m)) next.push_back(r);
            return next;
        };
        for (const auto& m : h) {
            if (anchor != h.end() && m == *anchor) continue;
            auto next = remove(m);
            if (!m.label.is_timeout() && !in_x_tau(m.label)) {
                step("P1", pos, ps(sum_of(rest)), choice(ps(sum_of(next)), prefix(m.label, m.target)));
                out.push_back(m);
            } else if (anchor == h.end()) {
                continue;  // time-outs stay for P5 below
            } else if (m.label.is_timeout()) {
                step("P2", pos, ps(sum_of(rest)), ps(sum_of(next)));
            } else {
                step("P3", pos, ps(sum_of(rest)), choice(ps(sum_of(next)), prefix(m.label, m.target)));
                out.push_back(m);
            }
            rest = std::move(next);
        }
        if (anchor != h.end()) {
            step("P4", pos, ps(prefix(anchor->label, anchor->target)), prefix(anchor->label, anchor->target));
            out.push_back(*anchor);
        } else {
            std::vector<Move> wrapped;
            for (const auto& m : rest) wrapped.push_back({m.label, tocsp::theta(x, x, m.target)});
            step("P5", pos, ps(sum_of(rest)), sum_of(wrapped));
            out.insert(out.end(), wrapped.begin(), wrapped.end());
        }
        return finish(pos, sum_of(out), out);
    }

    RewriteTrace* trace_;
    std::uint32_t budget_;
};

}  // namespace

Term HeadNormalForm::as_term() const { return sum_of(summands); }

std::string RewriteTrace::to_text(const Alphabet& alpha) const {
    std::ostringstream os;
    for (const auto& s : steps)
        os << s.axiom << " @" << (s.position.empty() ? "root" : s.position) << ": " << print(s.before, alpha)
           << "  =  " << print(s.after, alpha) << "\n";
    return os.str();
}

HeadNormalForm hnf(Term p, RewriteTrace* trace) {
    require_closed_valid(p);
    if (!is_guarded(p)) throw InvalidTerm("head normal forms need guarded recursion");
    Normaliser n(trace, unfolding_measure(p));
    HeadNormalForm h{n.go(p, "")};
    if (h.summands != derive_transitions(p))
        throw std::logic_error("head normal form disagrees with the transition relation");
    return h;
}

HeadNormalForm psi_expand(ActionSet x, const HeadNormalForm& h) {
    bool anchored = std::any_of(h.summands.begin(), h.summands.end(), [&](const Move& m) {
        return m.label.is_tau() || (m.label.is_visible() && x.contains(m.label.action()));
    });
    HeadNormalForm out;
    for (const auto& m : h.summands) {
        if (!m.label.is_timeout())
            out.summands.push_back(m);
        else if (!anchored)
            out.summands.push_back({m.label, theta(x, x, m.target)});
    }
    out.summands = normalised(out.summands);
    return out;
}

// ------------------------------------------------------------ recursion-free decision

namespace {

std::string describe_class(const std::vector<ActionSet>& members, ActionSet relevant, const Alphabet* alpha) {
    auto name = [&](Action a) { return alpha && a < alpha->size() ? alpha->name(a) : "#" + std::to_string(a); };
    std::set<std::uint64_t> want;
    for (auto m : members) want.insert(m.bits());
    auto all = relevant.subsets();
    auto acts = relevant.elements();
    // Smallest conjunction of literals a∈X / a∉X that carves out exactly this class.
    if (acts.size() <= 8) {
        std::size_t best_lits = SIZE_MAX;
        std::pair<ActionSet, ActionSet> best;
        for (ActionSet pos : relevant.subsets())
            for (ActionSet neg : (relevant - pos).subsets()) {
                std::size_t lits = static_cast<std::size_t>(pos.size() + neg.size());
                if (lits >= best_lits) continue;
                bool exact = true;
                for (auto x : all) {
                    bool sat = pos.subset_of(x) && !neg.intersects(x);
                    if (sat != static_cast<bool>(want.count(x.bits()))) {
                        exact = false;
                        break;
                    }
                }
                if (exact) {
                    best_lits = lits;
                    best = {pos, neg};
                }
            }
        if (best_lits != SIZE_MAX) {
            if (best_lits == 0) return "{all X}";
            std::string s = "{";
            bool first = true;
            auto emit = [&](const std::string& lit) {
                if (!first) s += ", ";
                first = false;
                s += lit;
            };
            auto pos = best.first.elements(), neg = best.second.elements();
            if (!pos.empty()) {
                std::string names;
                for (std::size_t i = 0; i < pos.size(); ++i) names += (i ? "," : "") + name(pos[i]);
                emit(names + "∈X");
            }
            if (!neg.empty()) {
                std::string names;
                for (std::size_t i = 0; i < neg.size(); ++i) names += (i ? "," : "") + name(neg[i]);
                emit(names + "∉X");
            }
            return s + "}";
        }
    }
    std::string s = "X ∈ {";
    for (std::size_t i = 0; i < members.size(); ++i) {
        s += i ? ", " : "";
        s += "{";
        auto el = members[i].elements();
        for (std::size_t j = 0; j < el.size(); ++j) s += (j ? "," : "") + name(el[j]);
        s += "}";
    }
    return s + "}";
}

// Reactive bisimilarity of recursion-free terms by structural induction.
class FiniteDecider {
public:
    explicit FiniteDecider(ActionSet relevant) : envs_(relevant.subsets()) {}

    bool equal(Term p, Term q) {
        if (p == q) return true;
        auto key = p->id < q->id ? std::make_pair(p, q) : std::make_pair(q, p);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        bool r = claim1(p, q) && claim1(q, p) && claim2(p, q) && claim2(q, p);
        memo_.emplace(key, r);
        return r;
    }

private:
    const std::vector<Move>& moves(Term t) { return sem_.transitions(t); }

    // Every A∪{τ} summand of p is matched by q.
    bool claim1(Term p, Term q) {
        for (const auto& m : moves(p)) {
            if (m.label.is_timeout()) continue;
            bool ok = false;
            for (const auto& n : moves(q))
                if (n.label == m.label && equal(m.target, n.target)) {
                    ok = true;
                    break;
                }
            if (!ok) return false;
        }
        return true;
    }

    // In each environment that p idles in, every time-out of p is matched under θ_X.
    bool claim2(Term p, Term q) {
        const Initials& ip = sem_.initials(p);
        for (ActionSet x : envs_) {
            if (!ip.blocked_by(x)) continue;
            for (const auto& m : moves(p)) {
                if (!m.label.is_timeout()) continue;
                bool ok = false;
                for (const auto& n : moves(q))
                    if (n.label.is_timeout() && equal(theta(x, x, m.target), theta(x, x, n.target))) {
                        ok = true;
                        break;
                    }
                if (!ok) return false;
            }
        }
        return true;
    }

    std::vector<ActionSet> envs_;
    Semantics sem_;
    std::map<std::pair<Term, Term>, bool, std::function<bool(const std::pair<Term, Term>&, const std::pair<Term, Term>&)>>
        memo_{[](const auto& a, const auto& b) {
            return std::make_pair(a.first->id, a.second->id) < std::make_pair(b.first->id, b.second->id);
        }};
};

ActionSet relevant_of(const std::vector<Term>& roots) {
    return relevant_alphabet(explore(roots, kDefaultMaxStates));
}

}  // namespace

std::vector<EnvClass> environment_classes(const HeadNormalForm& hp, const HeadNormalForm& hq, ActionSet relevant,
                                          const Alphabet* alpha) {
    std::vector<EnvClass> out;
    std::map<std::pair<std::uint64_t, std::uint64_t>, std::size_t> index;
    for (ActionSet x : relevant.subsets()) {
        Term l = psi_expand(x, hp).as_term(), r = psi_expand(x, hq).as_term();
        auto key = std::make_pair(l->id, r->id);
        auto it = index.find(key);
        if (it == index.end()) {
            it = index.emplace(key, out.size()).first;
            EnvClass c;
            c.psi_left = l;
            c.psi_right = r;
            out.push_back(std::move(c));
        }
        out[it->second].members.push_back(x);
    }
    // Present classes by their largest member first, so that the class of the full alphabet leads.
    std::stable_sort(out.begin(), out.end(), [](const EnvClass& a, const EnvClass& b) {
        return a.members.back() > b.members.back();
    });
    for (auto& c : out) c.description = describe_class(c.members, relevant, alpha);
    return out;
}

EquationalVerdict eq_recursion_free(Term p, Term q) {
    for (Term t : {p, q}) {
        require_closed_valid(t);
        if (t->has_rec) throw InvalidTerm("eq_recursion_free: input contains recursion");
    }
    EquationalVerdict v;
    v.relevant = relevant_of({p, q});
    HeadNormalForm hp = hnf(p, &v.trace), hq = hnf(q, &v.trace);
    FiniteDecider d(v.relevant);
    v.classes = environment_classes(hp, hq, v.relevant);
    v.equivalent = true;
    for (auto& c : v.classes) {
        c.equal = d.equal(c.psi_left, c.psi_right);
        v.equivalent = v.equivalent && c.equal;
    }
    return v;
}

// ------------------------------------------------------------ laws

const std::vector<std::string>& law_names() {
    static const std::vector<std::string> names = {"L0", "L1", "L2", "L3", "L3'"};
    return names;
}

std::vector<std::pair<std::string, std::string>> law_parameters(const std::string& law) {
    if (law == "L0") return {{"a", "action"}, {"P", "term"}, {"Q", "term"}, {"R", "term"}, {"S", "term"}};
    if (law == "L1") return {{"K", "set"}, {"V", "set"}, {"L", "set"}, {"U", "set"}, {"x", "term"}};
    if (law == "L2") return {{"P", "term"}, {"Q", "term"}};
    if (law == "L3") return {{"x", "term"}, {"y", "term"}};
    if (law == "L3'") return {{"a", "action"}, {"x", "term"}, {"y", "term"}};
    throw std::invalid_argument("unknown law '" + law + "' (expected one of L0, L1, L2, L3, L3')");
}

namespace {
template <class T>
T get(const LawBinding& b, const std::string& law, const std::string& key) {
    auto it = b.find(key);
    if (it == b.end()) throw std::invalid_argument(law + ": missing binding for '" + key + "'");
    if (auto v = std::get_if<T>(&it->second)) return *v;
    throw std::invalid_argument(law + ": binding '" + key + "' has the wrong kind");
}
}  // namespace

bool theta_collapse_side_condition(ActionSet k, ActionSet v, ActionSet l, ActionSet u) {
    if (!(k | l).subset_of(v & u)) return false;
    return u == v || k == l || (k.subset_of(l) && l.subset_of(u) && u.subset_of(v)) ||
           (l.subset_of(k) && k.subset_of(v) && v.subset_of(u));
}

LawInstance instantiate_law(const std::string& law, const LawBinding& b, ActionSet universe, bool enforce) {
    law_parameters(law);  // validates the name
    LawInstance inst;
    inst.law = law;
    if (law == "L0") {
        Label a = Label::visible(get<Action>(b, law, "a"));
        Term P = get<Term>(b, law, "P"), Q = get<Term>(b, law, "Q"), R = get<Term>(b, law, "R"), S = get<Term>(b, law, "S");
        Term tau_r = prefix(Label::tau(), R);
        inst.lhs = choice(prefix(a, P), prefix(Label::timeout(), sum({Q, tau_r, prefix(a, S)})));
        inst.rhs = choice(prefix(a, P), prefix(Label::timeout(), choice(Q, tau_r)));
        inst.relation = Relation::Reactive;
    } else if (law == "L1") {
        ActionSet K = get<ActionSet>(b, law, "K"), V = get<ActionSet>(b, law, "V"), L = get<ActionSet>(b, law, "L"),
                  U = get<ActionSet>(b, law, "U");
        Term x = get<Term>(b, law, "x");
        if (!K.subset_of(V) || !L.subset_of(U)) throw SideConditionViolation("L1: theta needs lower ⊆ upper");
        if (!(K | L).subset_of(V & U))
            throw SideConditionViolation("L1: right-hand side needs (K∪L) ⊆ (V∩U)");
        if (enforce && !theta_collapse_side_condition(K, V, L, U))
            throw SideConditionViolation("L1: needs U=V, K=L, K⊆L⊆U⊆V or L⊆K⊆V⊆U");
        inst.lhs = theta(K, V, theta(L, U, x));
        inst.rhs = theta(K | L, V & U, x);
        inst.relation = Relation::Strong;
    } else if (law == "L2") {
        Term P = get<Term>(b, law, "P"), Q = get<Term>(b, law, "Q");
        inst.lhs = choice(prefix(Label::tau(), P), prefix(Label::timeout(), Q));
        inst.rhs = prefix(Label::tau(), P);
        inst.relation = Relation::Reactive;
    } else if (law == "L3") {
        Term x = get<Term>(b, law, "x"), y = get<Term>(b, law, "y");
        ActionSet in;
        for (Term s : summands(x)) {
            if (s->op != Op::Prefix || !s->label.is_visible()) {
                if (enforce) throw SideConditionViolation("L3: x must be a sum of visible-action prefixes");
                continue;
            }
            in.insert(s->label.action());
        }
        inst.lhs = choice(x, prefix(Label::timeout(), y));
        inst.rhs = choice(x, prefix(Label::timeout(), theta(ActionSet{}, universe - in, y)));
        inst.relation = Relation::Reactive;
    } else {
        Action a = get<Action>(b, law, "a");
        Term x = get<Term>(b, law, "x"), y = get<Term>(b, law, "y");
        Term ax = prefix(Label::visible(a), x);
        inst.lhs = choice(ax, prefix(Label::timeout(), y));
        inst.rhs = choice(ax, prefix(Label::timeout(), theta(ActionSet{}, universe - ActionSet::single(a), y)));
        inst.relation = Relation::Reactive;
    }
    return inst;
}

Verdict check_law(const std::string& law, const LawBinding& binding, ActionSet universe, bool enforce,
                  const CheckOptions& opts) {
    auto inst = instantiate_law(law, binding, universe, enforce);
    return inst.relation == Relation::Strong ? strong_bisim(inst.lhs, inst.rhs, opts)
                                             : reactive_bisim(inst.lhs, inst.rhs, opts);
}

Verdict theta_collapse_check(ActionSet k, ActionSet v, ActionSet l, ActionSet u, Term p, bool enforce,
                             const CheckOptions& opts) {
    LawBinding b{{"K", k}, {"V", v}, {"L", l}, {"U", u}, {"x", p}};
    return check_law("L1", b, ActionSet{}, enforce, opts);
}

}  // namespace tocsp
