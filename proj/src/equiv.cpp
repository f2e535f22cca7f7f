#include "tocsp/equiv.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "tocsp/syntax.hpp"

namespace tocsp {

const char* relation_name(Relation r) {
    switch (r) {
    case Relation::Strong: return "strong";
    case Relation::Reactive: return "reactive";
    case Relation::Initials: return "initials";
    case Relation::XBisim: return "x-bisim";
    }
    return "?";
}

namespace {

void require_checkable(Term t) {
    require_closed_valid(t);
    if (!is_guarded(t)) throw InvalidTerm("unguarded recursion is not supported by the equivalence checkers");
}

Initials initials_from_lts(const Lts& lts, std::uint32_t s) {
    Initials out;
    for (auto k = lts.begin(s); k < lts.end(s); ++k) {
        Label l = lts.labels[k];
        if (l.is_visible())
            out.visible.insert(l.action());
        else if (l.is_tau())
            out.tau = true;
    }
    return out;
}

std::vector<Initials> all_initials(const Lts& lts) {
    std::vector<Initials> out(lts.size());
    for (std::uint32_t s = 0; s < lts.size(); ++s) out[s] = initials_from_lts(lts, s);
    return out;
}

// Environments in the order used when searching for witnesses: by size, then
// bitmask, with the empty environment last.
std::vector<std::size_t> witness_env_order(const std::vector<ActionSet>& envs) {
    std::vector<std::size_t> order(envs.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        auto key = [&](std::size_t i) {
            int sz = envs[i].size();
            return std::make_pair(sz == 0 ? 1000 : sz, envs[i].bits());
        };
        return key(a) < key(b);
    });
    return order;
}

// One direction of the time-out bisimulation clauses for (p,q) against `alive`.
template <class Alive>
bool half_ok(const ReactiveClosure& c, const std::vector<Initials>& init, std::uint32_t p, std::uint32_t q,
             Alive&& alive) {
    const Lts& lts = c.lts;
    bool p_timeout = false;
    for (auto k = lts.begin(p); k < lts.end(p); ++k) {
        Label l = lts.labels[k];
        if (l.is_timeout()) {
            p_timeout = true;
            continue;
        }
        std::uint32_t pt = lts.targets[k];
        bool matched = false;
        for (auto j = lts.begin(q); j < lts.end(q) && !matched; ++j)
            matched = lts.labels[j] == l && alive(pt, lts.targets[j]);
        if (!matched) return false;
    }
    if (!p_timeout) return true;
    for (std::size_t xi = 0; xi < c.envs.size(); ++xi) {
        if (!init[p].blocked_by(c.envs[xi])) continue;
        for (auto k = lts.begin(p); k < lts.end(p); ++k) {
            if (!lts.labels[k].is_timeout()) continue;
            std::uint32_t pw = c.wrapped(lts.targets[k], xi);
            bool matched = false;
            for (auto j = lts.begin(q); j < lts.end(q) && !matched; ++j)
                matched = lts.labels[j].is_timeout() && alive(pw, c.wrapped(lts.targets[j], xi));
            if (!matched) return false;
        }
    }
    return true;
}

}  // namespace

// ------------------------------------------------------------ closure

ReactiveClosure ReactiveClosure::build(const std::vector<Term>& roots, const CheckOptions& opts) {
    for (Term r : roots) require_checkable(r);
    Lts plain = explore(roots, opts.max_states);
    if (!plain.complete)
        throw BudgetExceeded("state space exceeds " + std::to_string(opts.max_states) + " states");
    ReactiveClosure c;
    c.relevant = relevant_alphabet(plain);
    if (c.relevant.size() > opts.env_limit)
        throw BudgetExceeded("relevant alphabet has " + std::to_string(c.relevant.size()) +
                             " actions, above the environment limit of " + std::to_string(opts.env_limit));
    c.envs = c.relevant.subsets();
    c.plain = plain.size();

    std::vector<Term> all(plain.states);
    for (Term s : plain.states)
        for (ActionSet x : c.envs) all.push_back(theta(x, x, s));
    std::size_t bound = c.plain * (c.envs.size() + 1);
    c.lts = explore(all, bound);
    if (!c.lts.complete || c.lts.size() > bound) throw std::logic_error("reactive closure is not transition-closed");
    for (std::uint32_t i = 0; i < c.lts.size(); ++i) c.index_.emplace(c.lts.states[i], i);
    c.wrap_.resize(c.plain * c.envs.size());
    for (std::uint32_t s = 0; s < c.plain; ++s)
        for (std::size_t xi = 0; xi < c.envs.size(); ++xi)
            c.wrap_[s * c.envs.size() + xi] = c.index_.at(theta(c.envs[xi], c.envs[xi], plain.states[s]));
    c.lts.roots.clear();
    for (auto r : plain.roots) c.lts.roots.push_back(r);
    return c;
}

std::size_t ReactiveClosure::env_index(ActionSet x) const {
    ActionSet y = x & relevant;
    auto it = std::lower_bound(envs.begin(), envs.end(), y);
    return static_cast<std::size_t>(it - envs.begin());
}

std::uint32_t ReactiveClosure::index_of(Term t) const {
    auto it = index_.find(t);
    return it == index_.end() ? UINT32_MAX : it->second;
}

// ------------------------------------------------------------ reactive relation

ReactiveRelation::ReactiveRelation(const ReactiveClosure& c, std::optional<std::uint64_t> seed)
    : c_(c), n_(c.lts.size()), rel_(n_ * n_, 0) {
    const Lts& lts = c.lts;
    auto init = all_initials(lts);
    for (std::uint32_t p = 0; p < n_; ++p)
        for (std::uint32_t q = 0; q < n_; ++q) rel_[p * n_ + q] = init[p] == init[q];

    // Dependents of a pair: predecessor pairs, plus t-predecessor pairs of the
    // unwrapped states when both sides are wrapped in the same environment.
    std::vector<std::vector<std::uint32_t>> pred(n_), tpred(n_);
    for (std::uint32_t s = 0; s < n_; ++s)
        for (auto k = lts.begin(s); k < lts.end(s); ++k) {
            pred[lts.targets[k]].push_back(s);
            if (lts.labels[k].is_timeout()) tpred[lts.targets[k]].push_back(s);
        }
    for (auto& v : pred) v.erase(std::unique(v.begin(), v.end()), v.end());
    for (auto& v : tpred) v.erase(std::unique(v.begin(), v.end()), v.end());
    std::vector<std::vector<std::pair<std::uint32_t, std::size_t>>> unwrap(n_);
    for (std::uint32_t s = 0; s < c.plain; ++s)
        for (std::size_t xi = 0; xi < c.envs.size(); ++xi) unwrap[c.wrapped(s, xi)].emplace_back(s, xi);

    std::vector<std::pair<std::uint32_t, std::uint32_t>> initial;
    for (std::uint32_t p = 0; p < n_; ++p)
        for (std::uint32_t q = p + 1; q < n_; ++q)
            if (rel_[p * n_ + q]) initial.emplace_back(p, q);
    if (seed) {
        std::mt19937_64 rng(*seed);
        std::shuffle(initial.begin(), initial.end(), rng);
    }
    std::deque<std::pair<std::uint32_t, std::uint32_t>> work(initial.begin(), initial.end());
    std::vector<std::uint8_t> queued(n_ * n_, 0);
    for (auto [p, q] : initial) queued[p * n_ + q] = 1;
    auto alive = [&](std::uint32_t a, std::uint32_t b) { return rel_[a * n_ + b] != 0; };
    auto enqueue = [&](std::uint32_t a, std::uint32_t b) {
        if (a > b) std::swap(a, b);
        if (a == b || !rel_[a * n_ + b] || queued[a * n_ + b]) return;
        queued[a * n_ + b] = 1;
        work.emplace_back(a, b);
    };
    while (!work.empty()) {
        auto [p, q] = work.front();
        work.pop_front();
        queued[p * n_ + q] = 0;
        if (!rel_[p * n_ + q]) continue;
        if (half_ok(c, init, p, q, alive) && half_ok(c, init, q, p, alive)) continue;
        rel_[p * n_ + q] = rel_[q * n_ + p] = 0;
        for (auto a : pred[p])
            for (auto b : pred[q]) enqueue(a, b);
        for (auto [ps, pxi] : unwrap[p])
            for (auto [qs, qxi] : unwrap[q])
                if (pxi == qxi)
                    for (auto a : tpred[ps])
                        for (auto b : tpred[qs]) enqueue(a, b);
    }
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> ReactiveRelation::witness(std::uint32_t p,
                                                                               std::uint32_t q) const {
    const Lts& lts = c_.lts;
    auto init = all_initials(lts);
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    std::deque<std::pair<std::uint32_t, std::uint32_t>> work;
    auto add = [&](std::uint32_t a, std::uint32_t b) {
        if (seen.insert({a, b}).second) {
            out.emplace_back(a, b);
            work.emplace_back(a, b);
        }
    };
    if (!related(p, q)) return out;
    add(p, q);
    while (!work.empty()) {
        auto [u, v] = work.front();
        work.pop_front();
        for (int side = 0; side < 2; ++side) {
            std::uint32_t a = side ? v : u, b = side ? u : v;
            for (auto k = lts.begin(a); k < lts.end(a); ++k) {
                Label l = lts.labels[k];
                if (l.is_timeout()) continue;
                for (auto j = lts.begin(b); j < lts.end(b); ++j)
                    if (lts.labels[j] == l && related(lts.targets[k], lts.targets[j])) {
                        side ? add(lts.targets[j], lts.targets[k]) : add(lts.targets[k], lts.targets[j]);
                        break;
                    }
            }
            for (std::size_t xi = 0; xi < c_.envs.size(); ++xi) {
                if (!init[a].blocked_by(c_.envs[xi])) continue;
                for (auto k = lts.begin(a); k < lts.end(a); ++k) {
                    if (!lts.labels[k].is_timeout()) continue;
                    auto aw = c_.wrapped(lts.targets[k], xi);
                    for (auto j = lts.begin(b); j < lts.end(b); ++j) {
                        if (!lts.labels[j].is_timeout()) continue;
                        auto bw = c_.wrapped(lts.targets[j], xi);
                        if (related(aw, bw)) {
                            side ? add(bw, aw) : add(aw, bw);
                            break;
                        }
                    }
                }
            }
        }
    }
    return out;
}

// ------------------------------------------------------------ strong bisimilarity

std::vector<std::uint32_t> strong_partition(const Lts& lts) {
    std::size_t n = lts.size();
    std::vector<std::uint32_t> block(n, 0);
    std::size_t count = n ? 1 : 0;
    for (;;) {
        std::map<std::pair<std::uint32_t, std::vector<std::pair<int, std::uint32_t>>>, std::uint32_t> ids;
        std::vector<std::uint32_t> next(n);
        for (std::uint32_t s = 0; s < n; ++s) {
            std::vector<std::pair<int, std::uint32_t>> sig;
            for (auto k = lts.begin(s); k < lts.end(s); ++k) sig.emplace_back(lts.labels[k].code(), block[lts.targets[k]]);
            std::sort(sig.begin(), sig.end());
            sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
            auto [it, fresh] = ids.emplace(std::make_pair(block[s], std::move(sig)), static_cast<std::uint32_t>(ids.size()));
            next[s] = it->second;
        }
        block = std::move(next);
        if (ids.size() == count) return block;
        count = ids.size();
    }
}

Verdict strong_bisim(Term p, Term q, const CheckOptions& opts) {
    require_checkable(p);
    require_checkable(q);
    Lts lts = explore({p, q}, opts.max_states);
    if (!lts.complete) throw BudgetExceeded("state space exceeds " + std::to_string(opts.max_states) + " states");
    auto block = strong_partition(lts);
    std::uint32_t ip = lts.roots.front(), iq = lts.roots.back();
    Verdict v;
    v.equivalent = block[ip] == block[iq];
    if (v.equivalent && opts.certify) {
        Certificate cert;
        cert.relation = Relation::Strong;
        std::set<std::pair<std::uint32_t, std::uint32_t>> seen{{ip, iq}};
        std::deque<std::pair<std::uint32_t, std::uint32_t>> work{{ip, iq}};
        while (!work.empty()) {
            auto [u, w] = work.front();
            work.pop_front();
            cert.pairs.emplace_back(lts.states[u], lts.states[w]);
            for (int side = 0; side < 2; ++side) {
                std::uint32_t a = side ? w : u, b = side ? u : w;
                for (auto k = lts.begin(a); k < lts.end(a); ++k)
                    for (auto j = lts.begin(b); j < lts.end(b); ++j)
                        if (lts.labels[j] == lts.labels[k] && block[lts.targets[j]] == block[lts.targets[k]]) {
                            auto pr = side ? std::make_pair(lts.targets[j], lts.targets[k])
                                           : std::make_pair(lts.targets[k], lts.targets[j]);
                            if (seen.insert(pr).second) work.push_back(pr);
                            break;
                        }
            }
        }
        v.certificate = std::move(cert);
    }
    return v;
}

// ------------------------------------------------------------ initials equivalence

Verdict initials_eq(Term p, Term q) {
    require_closed_valid(p);
    require_closed_valid(q);
    Initials ip = initials(p), iq = initials(q);
    Verdict v;
    v.equivalent = ip == iq;
    if (!v.equivalent) {
        if (ip.tau != iq.tau) {
            v.formula = ip.tau ? f_diam(Label::tau(), f_true()) : f_not(f_diam(Label::tau(), f_true()));
        } else {
            ActionSet only_p = ip.visible - iq.visible, only_q = iq.visible - ip.visible;
            if (!only_p.empty())
                v.formula = f_diam(Label::visible(only_p.elements().front()), f_true());
            else
                v.formula = f_not(f_diam(Label::visible(only_q.elements().front()), f_true()));
        }
    } else {
        Certificate cert;
        cert.relation = Relation::Initials;
        cert.pairs.emplace_back(p, q);
        v.certificate = std::move(cert);
    }
    return v;
}

// ------------------------------------------------------------ distinguishing formulas

namespace {

std::size_t formula_size(const Formula& f) {
    std::size_t s = 1;
    for (const auto& p : f->parts) s += formula_size(p);
    return s;
}

class Distinguisher {
public:
    explicit Distinguisher(const ReactiveClosure& c) : c_(c), n_(c.lts.size()), init_(all_initials(c.lts)) {
        env_order_ = witness_env_order(c.envs);
        // Synchronous refinement: round[p,q] = the round in which the pair was removed, 0 if never.
        round_.assign(n_ * n_, 0);
        std::vector<std::uint8_t> cur(n_ * n_, 1);
        for (std::uint32_t r = 1;; ++r) {
            auto alive = [&](std::uint32_t a, std::uint32_t b) { return cur[a * n_ + b] != 0; };
            std::vector<std::pair<std::uint32_t, std::uint32_t>> removed;
            for (std::uint32_t p = 0; p < n_; ++p)
                for (std::uint32_t q = p + 1; q < n_; ++q)
                    if (cur[p * n_ + q] && !(half_ok(c, init_, p, q, alive) && half_ok(c, init_, q, p, alive)))
                        removed.emplace_back(p, q);
            if (removed.empty()) break;
            for (auto [p, q] : removed) {
                cur[p * n_ + q] = cur[q * n_ + p] = 0;
                round_[p * n_ + q] = round_[q * n_ + p] = r;
            }
        }
    }

    bool related(std::uint32_t p, std::uint32_t q) const { return round_[p * n_ + q] == 0; }

    // Formula true at p and false at q.
    Formula build(std::uint32_t p, std::uint32_t q) {
        auto key = std::make_pair(p, q);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        std::uint32_t r = round_[p * n_ + q];
        if (r == 0) throw std::logic_error("no distinguishing formula for related states");
        std::vector<Formula> cands;
        if (auto f = violation(p, q, r)) cands.push_back(*f);
        if (auto f = violation(q, p, r)) cands.push_back(f_not(*f));
        if (cands.empty()) throw std::logic_error("distinguishing formula construction failed");
        auto best = *std::min_element(cands.begin(), cands.end(), [](const Formula& a, const Formula& b) {
            return std::make_pair(modal_depth(a), formula_size(a)) < std::make_pair(modal_depth(b), formula_size(b));
        });
        memo_.emplace(key, best);
        return best;
    }

private:
    // Pairs present before round r.
    bool alive_before(std::uint32_t a, std::uint32_t b, std::uint32_t r) const {
        auto k = round_[a * n_ + b];
        return k == 0 || k >= r;
    }

    Formula conj_over(std::uint32_t p_target, const std::vector<std::uint32_t>& q_targets) {
        std::vector<Formula> parts;
        std::set<const FormulaNode*> have;
        for (auto qt : q_targets) {
            Formula f = build(p_target, qt);
            if (have.insert(f.get()).second) parts.push_back(f);
        }
        return f_and(std::move(parts));
    }

    // A formula witnessing that p has a move q cannot match within the relation before round r.
    std::optional<Formula> violation(std::uint32_t p, std::uint32_t q, std::uint32_t r) {
        const Lts& lts = c_.lts;
        std::optional<Formula> best;
        auto consider = [&](Formula f) {
            if (!best || std::make_pair(modal_depth(f), formula_size(f)) <
                             std::make_pair(modal_depth(*best), formula_size(*best)))
                best = std::move(f);
        };
        for (auto k = lts.begin(p); k < lts.end(p); ++k) {
            Label l = lts.labels[k];
            if (l.is_timeout()) continue;
            std::vector<std::uint32_t> qs;
            bool matched = false;
            for (auto j = lts.begin(q); j < lts.end(q); ++j) {
                if (lts.labels[j] != l) continue;
                if (alive_before(lts.targets[k], lts.targets[j], r)) matched = true;
                qs.push_back(lts.targets[j]);
            }
            if (!matched) consider(f_diam(l, conj_over(lts.targets[k], qs)));
        }
        for (std::size_t xi : env_order_) {
            if (!init_[p].blocked_by(c_.envs[xi])) continue;
            for (auto k = lts.begin(p); k < lts.end(p); ++k) {
                if (!lts.labels[k].is_timeout()) continue;
                auto pw = c_.wrapped(lts.targets[k], xi);
                std::vector<std::uint32_t> qs;
                bool matched = false;
                for (auto j = lts.begin(q); j < lts.end(q); ++j) {
                    if (!lts.labels[j].is_timeout()) continue;
                    auto qw = c_.wrapped(lts.targets[j], xi);
                    if (alive_before(pw, qw, r)) matched = true;
                    qs.push_back(qw);
                }
                if (!matched) consider(f_env(c_.envs[xi], conj_over(pw, qs)));
            }
        }
        return best;
    }

    const ReactiveClosure& c_;
    std::size_t n_;
    std::vector<Initials> init_;
    std::vector<std::size_t> env_order_;
    std::vector<std::uint32_t> round_;
    std::map<std::pair<std::uint32_t, std::uint32_t>, Formula> memo_;
};

Certificate make_reactive_certificate(const ReactiveRelation& rel, std::uint32_t p, std::uint32_t q, Relation kind) {
    Certificate cert;
    cert.relation = kind;
    cert.env_alphabet = rel.closure().relevant;
    for (auto [a, b] : rel.witness(p, q)) cert.pairs.emplace_back(rel.closure().lts.states[a], rel.closure().lts.states[b]);
    return cert;
}

}  // namespace

Verdict reactive_bisim(Term p, Term q, const CheckOptions& opts) {
    auto c = ReactiveClosure::build({p, q}, opts);
    ReactiveRelation rel(c, opts.shuffle_seed);
    auto ip = c.index_of(p), iq = c.index_of(q);
    Verdict v;
    v.equivalent = rel.related(ip, iq);
    if (v.equivalent && opts.certify) v.certificate = make_reactive_certificate(rel, ip, iq, Relation::Reactive);
    if (!v.equivalent && opts.explain) {
        Distinguisher d(c);
        Formula f = d.build(ip, iq);
        ModelChecker mc;
        if (!mc.sat(p, f) || mc.sat(q, f)) throw std::logic_error("distinguishing formula failed verification");
        v.formula = f;
    }
    return v;
}

Verdict x_bisim(Term p, ActionSet x, Term q, const CheckOptions& opts) {
    auto c = ReactiveClosure::build({p, q}, opts);
    ReactiveRelation rel(c, opts.shuffle_seed);
    std::size_t xi = c.env_index(x);
    auto ip = c.wrapped(c.index_of(p), xi), iq = c.wrapped(c.index_of(q), xi);
    Verdict v;
    v.equivalent = rel.related(ip, iq);
    if (v.equivalent && opts.certify) v.certificate = make_reactive_certificate(rel, ip, iq, Relation::XBisim);
    if (!v.equivalent && opts.explain) {
        Distinguisher d(c);
        Formula f = d.build(ip, iq);
        ModelChecker mc;
        if (!mc.sat_env(p, x, f) || mc.sat_env(q, x, f))
            throw std::logic_error("distinguishing formula failed verification");
        v.formula = f;
    }
    return v;
}

std::optional<Formula> distinguishing_formula(Term p, Term q, const CheckOptions& opts) {
    auto c = ReactiveClosure::build({p, q}, opts);
    Distinguisher d(c);
    auto ip = c.index_of(p), iq = c.index_of(q);
    if (d.related(ip, iq)) return std::nullopt;
    Formula f = d.build(ip, iq);
    ModelChecker mc;
    if (!mc.sat(p, f) || mc.sat(q, f)) throw std::logic_error("distinguishing formula failed verification");
    return f;
}

// ------------------------------------------------------------ brute-force oracle

Verdict brute_force_gsrb(Term p, Term q, std::optional<ActionSet> x, std::size_t bound) {
    require_checkable(p);
    require_checkable(q);
    Lts lts = explore({p, q}, bound);
    if (!lts.complete || lts.size() > bound)
        throw InstanceTooLarge("oracle instance exceeds " + std::to_string(bound) + " states");
    const std::size_t n = lts.size();
    ActionSet rel_alpha = relevant_alphabet(lts);
    auto envs = rel_alpha.subsets();
    const std::size_t e = envs.size();
    auto init = all_initials(lts);

    std::vector<std::uint8_t> pairs(n * n, 1);
    std::vector<std::uint8_t> triples(e * n * n, 1);
    auto P = [&](std::uint32_t a, std::uint32_t b) -> std::uint8_t& { return pairs[a * n + b]; };
    auto T = [&](std::size_t y, std::uint32_t a, std::uint32_t b) -> std::uint8_t& { return triples[(y * n + a) * n + b]; };
    auto blocked = [&](std::uint32_t s, ActionSet z) { return init[s].blocked_by(z); };

    // Is there q --l--> q' with pred(q')?
    auto exists_move = [&](std::uint32_t s, Label l, auto&& pred) {
        for (auto j = lts.begin(s); j < lts.end(s); ++j)
            if (lts.labels[j] == l && pred(lts.targets[j])) return true;
        return false;
    };

    auto pair_ok = [&](std::uint32_t a, std::uint32_t b) {
        for (auto k = lts.begin(a); k < lts.end(a); ++k) {
            Label l = lts.labels[k];
            auto at = lts.targets[k];
            if (l.is_timeout()) {
                for (std::size_t xi = 0; xi < e; ++xi)
                    if (blocked(a, envs[xi]) && !exists_move(b, l, [&](std::uint32_t bt) { return T(xi, at, bt) != 0; }))
                        return false;
            } else if (!exists_move(b, l, [&](std::uint32_t bt) { return P(at, bt) != 0; })) {
                return false;
            }
        }
        return true;
    };
    auto triple_ok = [&](std::size_t y, std::uint32_t a, std::uint32_t b) {
        ActionSet ys = envs[y];
        for (auto k = lts.begin(a); k < lts.end(a); ++k) {
            Label l = lts.labels[k];
            auto at = lts.targets[k];
            if (l.is_visible()) {
                if ((ys.contains(l.action()) || blocked(a, ys)) &&
                    !exists_move(b, l, [&](std::uint32_t bt) { return P(at, bt) != 0; }))
                    return false;
            } else if (l.is_tau()) {
                if (!exists_move(b, l, [&](std::uint32_t bt) { return T(y, at, bt) != 0; })) return false;
            } else {
                for (std::size_t xi = 0; xi < e; ++xi)
                    if (blocked(a, envs[xi] | ys) &&
                        !exists_move(b, l, [&](std::uint32_t bt) { return T(xi, at, bt) != 0; }))
                        return false;
            }
        }
        return true;
    };

    for (bool changed = true; changed;) {
        changed = false;
        for (std::uint32_t a = 0; a < n; ++a)
            for (std::uint32_t b = 0; b < n; ++b) {
                if (P(a, b) && !(pair_ok(a, b) && pair_ok(b, a))) {
                    P(a, b) = P(b, a) = 0;
                    changed = true;
                }
                for (std::size_t y = 0; y < e; ++y)
                    if (T(y, a, b) && !(triple_ok(y, a, b) && triple_ok(y, b, a))) {
                        T(y, a, b) = T(y, b, a) = 0;
                        changed = true;
                    }
            }
    }
    std::uint32_t ip = lts.roots.front(), iq = lts.roots.back();
    Verdict v;
    if (x) {
        auto y = static_cast<std::size_t>(std::lower_bound(envs.begin(), envs.end(), *x & rel_alpha) - envs.begin());
        v.equivalent = T(y, ip, iq) != 0;
    } else {
        v.equivalent = P(ip, iq) != 0;
    }
    return v;
}

// ------------------------------------------------------------ certificate checking

std::string verify_certificate(const Certificate& cert, std::pair<Term, Term> root) {
    std::set<std::pair<Term, Term>, std::function<bool(const std::pair<Term, Term>&, const std::pair<Term, Term>&)>>
        rel([](const auto& a, const auto& b) {
            return std::make_pair(a.first->id, a.second->id) < std::make_pair(b.first->id, b.second->id);
        });
    for (auto [a, b] : cert.pairs) {
        if (!a->closed() || !b->closed() || !a->valid || !b->valid) return "certificate contains an open or invalid term";
        rel.insert({a, b});
        rel.insert({b, a});
    }
    if (!rel.count(root)) return "root pair is not in the relation";
    if (cert.relation == Relation::Initials) return initials(root.first) == initials(root.second) ? "" : "initials differ";
    Semantics sem;
    auto envs = cert.env_alphabet.subsets();
    for (auto [a, b] : rel) {
        const auto ma = sem.transitions(a);
        const auto& mb = sem.transitions(b);
        auto has = [&](Label l, Term at, bool wrap, ActionSet x) {
            for (const auto& m : mb) {
                if (m.label != l) continue;
                if (!wrap && rel.count({at, m.target})) return true;
                if (wrap && rel.count({theta(x, x, at), theta(x, x, m.target)})) return true;
            }
            return false;
        };
        const Initials& ia = sem.initials(a);
        for (const auto& m : ma) {
            if (m.label.is_visible() && cert.relation != Relation::Strong && !cert.env_alphabet.contains(m.label.action()))
                return "action outside the certificate's environment alphabet";
            if (!m.label.is_timeout() || cert.relation == Relation::Strong) {
                if (!has(m.label, m.target, false, {})) return "unmatched move in pair (" + std::to_string(a->id) + "," + std::to_string(b->id) + ")";
                continue;
            }
            for (ActionSet x : envs)
                if (ia.blocked_by(x) && !has(m.label, m.target, true, x))
                    return "unmatched time-out in pair (" + std::to_string(a->id) + "," + std::to_string(b->id) + ")";
        }
    }
    return "";
}

}  // namespace tocsp
