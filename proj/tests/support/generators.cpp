#include "generators.hpp"

#include "tocsp/syntax.hpp"

namespace tocsp::testing {

namespace {

int pick(Rng& rng, int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }
bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

RenamePairs random_pairs(Rng& rng, int actions) {
    RenamePairs pairs;
    int n = 1 + pick(rng, actions + 1);
    for (int i = 0; i < n; ++i)
        pairs.emplace_back(static_cast<Action>(pick(rng, actions)), static_cast<Action>(pick(rng, actions)));
    return pairs;
}

class TermGen {
public:
    TermGen(Rng& rng, const GenConfig& cfg) : rng_(rng), cfg_(cfg) {}

    // `binders` holds the equation count of each enclosing rec, outermost first.
    Term gen(int depth, std::vector<int>& binders, bool guarded) {
        if (depth <= 0) return leaf(binders, guarded);
        int choice_count = cfg_.operators ? 10 : 5;
        switch (pick(rng_, choice_count)) {
        case 0:
        case 1:
        case 2: return prefix(random_label(rng_, cfg_.actions, cfg_.timeouts), gen(depth - 1, binders, true));
        case 3: return choice(gen(depth - 1, binders, guarded), gen(depth - 1, binders, guarded));
        case 4: {
            if (!cfg_.recursion || depth < 2) return leaf(binders, guarded);
            int k = 1 + pick(rng_, 2);
            binders.push_back(k);
            std::vector<Term> bodies;
            for (int i = 0; i < k; ++i) bodies.push_back(gen(depth - 1, binders, false));
            binders.pop_back();
            return rec(std::move(bodies), static_cast<std::uint32_t>(pick(rng_, k)));
        }
        case 5:
            return par(random_set(rng_, cfg_.actions), gen(depth - 1, binders, guarded),
                       gen(depth - 2, binders, guarded));
        case 6: return hide(random_set(rng_, cfg_.actions), gen(depth - 1, binders, guarded));
        case 7: return rename(random_pairs(rng_, cfg_.actions), gen(depth - 1, binders, guarded));
        case 8: {
            ActionSet l = random_set(rng_, cfg_.actions);
            ActionSet u = l | random_set(rng_, cfg_.actions);
            std::vector<int> none;
            return theta(l, u, gen(depth - 1, none, false));
        }
        default: {
            std::vector<int> none;
            return psi(random_set(rng_, cfg_.actions), gen(depth - 1, none, false));
        }
        }
    }

private:
    Term leaf(const std::vector<int>& binders, bool guarded) {
        if (guarded && !binders.empty() && coin(rng_, 0.6)) {
            int d = pick(rng_, static_cast<int>(binders.size()));
            int width = binders[binders.size() - 1 - d];
            return bvar(static_cast<std::uint32_t>(d), static_cast<std::uint32_t>(pick(rng_, width)));
        }
        if (coin(rng_, 0.4)) return prefix(random_label(rng_, cfg_.actions, cfg_.timeouts), nil());
        return nil();
    }

    Rng& rng_;
    const GenConfig& cfg_;
};

}  // namespace

ActionSet random_set(Rng& rng, int actions) {
    ActionSet s;
    for (int a = 0; a < actions; ++a)
        if (coin(rng)) s.insert(static_cast<Action>(a));
    return s;
}

Label random_label(Rng& rng, int actions, bool timeouts) {
    int r = pick(rng, actions + (timeouts ? 2 : 1));
    if (r < actions) return Label::visible(static_cast<Action>(r));
    return r == actions ? Label::tau() : Label::timeout();
}

Term random_term(Rng& rng, const GenConfig& cfg) {
    for (;;) {
        TermGen g(rng, cfg);
        std::vector<int> binders;
        Term t = g.gen(cfg.depth, binders, false);
        if (t->loose == 0 && is_valid(t) && is_guarded(t)) return t;
    }
}

Term random_recfree(Rng& rng, const GenConfig& cfg) {
    GenConfig c = cfg;
    c.recursion = false;
    return random_term(rng, c);
}

Term random_lts_term(Rng& rng, int states, int actions, int max_out, bool timeouts) {
    std::vector<Term> bodies;
    for (int i = 0; i < states; ++i) {
        std::vector<Term> parts;
        int out = pick(rng, max_out + 1);
        for (int k = 0; k < out; ++k)
            parts.push_back(prefix(random_label(rng, actions, timeouts),
                                   bvar(0, static_cast<std::uint32_t>(pick(rng, states)))));
        bodies.push_back(sum(parts));
    }
    return rec(std::move(bodies), 0);
}

Context random_context(Rng& rng, const GenConfig& cfg, std::string* description) {
    GenConfig small = cfg;
    small.depth = std::max(1, cfg.depth - 1);
    Term q = random_term(rng, small);
    int n = cfg.actions;
    Label l = random_label(rng, n, cfg.timeouts);
    ActionSet s = random_set(rng, n), s2 = random_set(rng, n);
    auto pairs = random_pairs(rng, n);
    auto say = [&](const char* d) {
        if (description) *description = d;
    };
    switch (pick(rng, 11)) {
    case 0: say("prefix"); return [=](Term p) { return prefix(l, p); };
    case 1: say("choice-left"); return [=](Term p) { return choice(p, q); };
    case 2: say("choice-right"); return [=](Term p) { return choice(q, p); };
    case 3: say("par-left"); return [=](Term p) { return par(s, p, q); };
    case 4: say("par-right"); return [=](Term p) { return par(s, q, p); };
    case 5: say("hide"); return [=](Term p) { return hide(s, p); };
    case 6: say("rename"); return [=](Term p) { return rename(pairs, p); };
    case 7: say("theta"); return [=](Term p) { return theta(s, s | s2, p); };
    case 8: say("psi"); return [=](Term p) { return psi(s, p); };
    case 9: {
        say("rec");
        Label l2 = random_label(rng, n, cfg.timeouts);
        return [=](Term p) { return rec({choice(prefix(l, bvar(0, 0)), prefix(l2, p))}, 0); };
    }
    default: {
        say("nested");
        Context inner = random_context(rng, small);
        Context outer = random_context(rng, small);
        return [=](Term p) { return outer(inner(p)); };
    }
    }
}

RecSpec random_spec(Rng& rng, int equations, const GenConfig& cfg) {
    for (;;) {
        TermGen g(rng, cfg);
        RecSpec s;
        std::vector<int> binders{equations};
        for (int i = 0; i < equations; ++i) s.bodies.push_back(g.gen(cfg.depth, binders, false));
        bool ok = true;
        for (int i = 0; i < equations && ok; ++i) {
            Term whole = rec(s.bodies, static_cast<std::uint32_t>(i));
            ok = is_valid(whole) && is_guarded(whole);
        }
        if (ok) return s;
    }
}

std::size_t reachable_states(Term t, std::size_t cap) {
    Lts l = explore({t}, cap);
    return l.complete ? l.size() : SIZE_MAX;
}

Alphabet letters(int n) {
    Alphabet a;
    for (int i = 0; i < n; ++i) a.add(std::string(1, static_cast<char>('a' + i)));
    return a;
}

}  // namespace tocsp::testing
