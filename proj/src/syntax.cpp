#include "tocsp/syntax.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>
#include <unordered_set>

#include "lexer.hpp"

namespace tocsp {

using detail::Tok;
using detail::Token;
using detail::TokenStream;

// ------------------------------------------------------------ de Bruijn

namespace {

struct PairHash {
    std::size_t operator()(const std::pair<Term, std::uint32_t>& p) const {
        return std::hash<const void*>{}(p.first) ^ (std::size_t{p.second} * 0x9e3779b97f4a7c15ULL);
    }
};
using LevelMemo = std::unordered_map<std::pair<Term, std::uint32_t>, Term, PairHash>;

Term shift_rec(Term t, std::int32_t by, std::uint32_t cutoff, LevelMemo& memo) {
    if (t->loose <= cutoff) return t;
    auto key = std::make_pair(t, cutoff);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    Term out;
    if (t->op == Op::BVar) {
        out = bvar(static_cast<std::uint32_t>(static_cast<std::int32_t>(t->depth) + by), t->index);
    } else {
        std::uint32_t inner = t->op == Op::Rec ? cutoff + 1 : cutoff;
        std::vector<Term> kids;
        kids.reserve(t->kids.size());
        for (Term k : t->kids) kids.push_back(shift_rec(k, by, inner, memo));
        out = rebuild(t, std::move(kids));
    }
    memo.emplace(key, out);
    return out;
}

Term instantiate_rec(Term t, const std::vector<Term>& repl, std::uint32_t level, LevelMemo& memo) {
    if (t->loose <= level) return t;
    auto key = std::make_pair(t, level);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    Term out;
    if (t->op == Op::BVar) {
        if (t->depth == level)
            out = level == 0 ? repl.at(t->index) : shift(repl.at(t->index), static_cast<std::int32_t>(level));
        else
            out = bvar(t->depth - 1, t->index);
    } else {
        std::uint32_t inner = t->op == Op::Rec ? level + 1 : level;
        std::vector<Term> kids;
        kids.reserve(t->kids.size());
        for (Term k : t->kids) kids.push_back(instantiate_rec(k, repl, inner, memo));
        out = rebuild(t, std::move(kids));
    }
    memo.emplace(key, out);
    return out;
}

// Turns free occurrences of names[i] into bound variable (level, i).
Term abstract_rec(Term t, const std::vector<std::string>& names, std::uint32_t level, LevelMemo& memo) {
    if (!t->has_var) return t;
    auto key = std::make_pair(t, level);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    Term out = t;
    if (t->op == Op::Var) {
        auto it = std::find(names.begin(), names.end(), t->name);
        if (it != names.end()) out = bvar(level, static_cast<std::uint32_t>(it - names.begin()));
    } else {
        std::uint32_t inner = t->op == Op::Rec ? level + 1 : level;
        std::vector<Term> kids;
        kids.reserve(t->kids.size());
        for (Term k : t->kids) kids.push_back(abstract_rec(k, names, inner, memo));
        out = rebuild(t, std::move(kids));
    }
    memo.emplace(key, out);
    return out;
}

Term abstract_names(Term t, const std::vector<std::string>& names) {
    LevelMemo memo;
    return abstract_rec(t, names, 0, memo);
}

}  // namespace

Term shift(Term t, std::int32_t by, std::uint32_t cutoff) {
    if (by == 0) return t;
    LevelMemo memo;
    return shift_rec(t, by, cutoff, memo);
}

Term instantiate(Term t, const std::vector<Term>& replacements, std::uint32_t level) {
    LevelMemo memo;
    return instantiate_rec(t, replacements, level, memo);
}

Term unfold(Term r) {
    if (r->op != Op::Rec) throw std::invalid_argument("unfold: not a rec node");
    if (Term cached = r->unfolded.load(std::memory_order_acquire)) return cached;
    std::vector<Term> copies;
    copies.reserve(r->kids.size());
    for (std::uint32_t j = 0; j < r->kids.size(); ++j) copies.push_back(with_selected(r, j));
    Term out = instantiate(r->kids[r->index], copies, 0);
    r->unfolded.store(out, std::memory_order_release);
    return out;
}

// ------------------------------------------------------------ analyses

std::set<std::string> free_variables(Term t) {
    std::set<std::string> out;
    std::unordered_set<Term> seen;
    std::function<void(Term)> go = [&](Term u) {
        if (!u->has_var || !seen.insert(u).second) return;
        if (u->op == Op::Var) out.insert(u->name);
        for (Term k : u->kids) go(k);
    };
    go(t);
    return out;
}

bool is_valid(Term t) { return t->valid; }

namespace {

using IndexSet = std::vector<std::uint32_t>;

class GuardAnalysis {
public:
    // Equations of binder `level` that occur unguarded in t.
    const IndexSet& unguarded(Term t, std::uint32_t level) {
        auto key = std::make_pair(t, level);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        IndexSet out;
        if (t->loose > level) {
            switch (t->op) {
            case Op::BVar:
                if (t->depth == level) out.push_back(t->index);
                break;
            case Op::Prefix: break;
            case Op::Rec:
                for (std::uint32_t i : reachable(t)) merge(out, unguarded(t->kids[i], level + 1));
                break;
            default:
                for (Term k : t->kids) merge(out, unguarded(k, level));
            }
        }
        return memo_.emplace(key, std::move(out)).first->second;
    }

    // Equations of a rec node reachable from the selected one through unguarded calls.
    IndexSet reachable(Term r) {
        std::vector<bool> seen(r->kids.size(), false);
        std::vector<std::uint32_t> stack{r->index};
        seen[r->index] = true;
        IndexSet out;
        while (!stack.empty()) {
            auto i = stack.back();
            stack.pop_back();
            out.push_back(i);
            for (auto j : unguarded(r->kids[i], 0))
                if (!seen[j]) {
                    seen[j] = true;
                    stack.push_back(j);
                }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    bool acyclic(Term r) {
        std::size_t n = r->kids.size();
        std::vector<int> colour(n, 0);
        std::function<bool(std::uint32_t)> dfs = [&](std::uint32_t i) {
            colour[i] = 1;
            for (auto j : unguarded(r->kids[i], 0)) {
                if (colour[j] == 1) return false;
                if (colour[j] == 0 && !dfs(j)) return false;
            }
            colour[i] = 2;
            return true;
        };
        for (std::uint32_t i = 0; i < n; ++i)
            if (colour[i] == 0 && !dfs(i)) return false;
        return true;
    }

private:
    static void merge(IndexSet& into, const IndexSet& from) {
        for (auto x : from)
            if (std::find(into.begin(), into.end(), x) == into.end()) into.push_back(x);
    }

    std::unordered_map<std::pair<Term, std::uint32_t>, IndexSet, PairHash> memo_;
};

}  // namespace

bool is_guarded(Term t) {
    if (!t->has_rec) return true;
    GuardAnalysis ga;
    std::unordered_set<Term> seen;
    std::vector<Term> stack{t};
    while (!stack.empty()) {
        Term u = stack.back();
        stack.pop_back();
        if (!u->has_rec || !seen.insert(u).second) continue;
        if (u->op == Op::Rec && !ga.acyclic(u)) return false;
        for (Term k : u->kids) stack.push_back(k);
    }
    return true;
}

std::uint32_t unfolding_measure(Term t) {
    std::unordered_map<Term, std::uint32_t> memo;
    std::function<std::uint32_t(Term)> go = [&](Term u) -> std::uint32_t {
        if (!u->has_rec || u->op == Op::Prefix) return 0;
        if (auto it = memo.find(u); it != memo.end()) return it->second;
        std::uint32_t m = 0;
        if (u->op == Op::Rec) {
            // Each equation is entered at most once along an unguarded chain, and
            // each entry may in turn unfold the recs nested in its body.
            m = static_cast<std::uint32_t>(u->kids.size());
            for (Term k : u->kids) m += go(k);
        } else {
            for (Term k : u->kids) m = std::max(m, go(k));
        }
        memo.emplace(u, m);
        return m;
    };
    return go(t);
}

Term substitute(Term t, const std::map<std::string, Term>& binding) {
    LevelMemo memo;
    std::function<Term(Term, std::uint32_t)> go = [&](Term u, std::uint32_t level) -> Term {
        if (!u->has_var) return u;
        auto key = std::make_pair(u, level);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        Term out = u;
        if (u->op == Op::Var) {
            if (auto it = binding.find(u->name); it != binding.end())
                out = shift(it->second, static_cast<std::int32_t>(level));
        } else {
            std::uint32_t inner = u->op == Op::Rec ? level + 1 : level;
            std::vector<Term> kids;
            for (Term k : u->kids) kids.push_back(go(k, inner));
            out = rebuild(u, std::move(kids));
        }
        memo.emplace(key, out);
        return out;
    };
    return go(t, 0);
}

// ------------------------------------------------------------ parsing

namespace {

class Parser {
public:
    Parser(TokenStream& ts, const Alphabet& alpha) : ts_(ts), alpha_(alpha) {}

    Term parse_sum() {
        std::vector<Term> parts{parse_par()};
        while (ts_.accept_punct("+")) parts.push_back(parse_par());
        return sum(parts);
    }

private:
    Term parse_par() {
        Term left = parse_unary();
        for (;;) {
            if (ts_.accept_punct("||")) {
                left = par(ActionSet{}, left, parse_unary());
            } else if (ts_.accept_punct("|[")) {
                ActionSet sync;
                if (!ts_.at_punct("]|")) {
                    do sync.insert(action(ts_.expect_ident("action")));
                    while (ts_.accept_punct(","));
                }
                ts_.expect_punct("]|");
                left = par(sync, left, parse_unary());
            } else {
                return left;
            }
        }
    }

    Term parse_unary() {
        const Token& tok = ts_.peek();
        if (tok.kind == Tok::Ident && ts_.at_punct(".", 1)) {
            Token name = ts_.next();
            ts_.next();
            Label l;
            if (name.text == "tau")
                l = Label::tau();
            else if (name.text == "t")
                l = Label::timeout();
            else if (auto a = alpha_.find(name.text))
                l = Label::visible(*a);
            else
                ts_.fail_at(name, "undeclared action '" + name.text + "'");
            return prefix(l, parse_unary());
        }
        if (ts_.at_word("hide")) {
            ts_.next();
            ActionSet s = parse_set();
            if (!ts_.at_word("in")) ts_.fail("expected 'in'");
            ts_.next();
            return hide(s, parse_unary());
        }
        if (ts_.at_word("rename")) {
            ts_.next();
            ts_.expect_punct("{");
            RenamePairs pairs;
            if (!ts_.at_punct("}")) {
                do {
                    ts_.expect_punct("(");
                    Action a = action(ts_.expect_ident("action"));
                    ts_.expect_punct(",");
                    Action b = action(ts_.expect_ident("action"));
                    ts_.expect_punct(")");
                    pairs.emplace_back(a, b);
                } while (ts_.accept_punct(","));
            }
            ts_.expect_punct("}");
            return rename(std::move(pairs), parse_unary());
        }
        if (ts_.at_word("theta")) {
            Token kw = ts_.next();
            ActionSet lower = parse_set();
            ActionSet upper = ts_.at_punct("{") ? parse_set() : lower;
            if (!lower.subset_of(upper))
                ts_.fail_at(kw, "theta lower set " + alpha_.format(lower) + " is not contained in upper set " +
                                    alpha_.format(upper));
            return theta(lower, upper, parse_unary());
        }
        if (ts_.at_word("psi")) {
            ts_.next();
            ActionSet x = parse_set();
            return psi(x, parse_unary());
        }
        return parse_atom();
    }

    Term parse_atom() {
        const Token& tok = ts_.peek();
        if (tok.kind == Tok::Zero) {
            ts_.next();
            return nil();
        }
        if (ts_.accept_punct("(")) {
            Term inner = parse_sum();
            ts_.expect_punct(")");
            return inner;
        }
        if (ts_.at_word("rec")) return parse_rec();
        if (tok.kind == Tok::Ident) {
            Token name = ts_.next();
            if (Alphabet::is_reserved(name.text)) ts_.fail_at(name, "unexpected keyword '" + name.text + "'");
            if (alpha_.find(name.text))
                ts_.fail_at(name, "action '" + name.text + "' used as a process (missing '.'?)");
            return var(name.text);
        }
        ts_.fail("expected a process term");
    }

    Term parse_rec() {
        Token kw = ts_.next();
        std::optional<Token> head;
        if (ts_.peek().kind == Tok::Ident) head = ts_.next();
        ts_.expect_punct("{");
        std::vector<std::string> names;
        std::vector<Term> bodies;
        while (!ts_.at_punct("}")) {
            Token name = ts_.peek();
            std::string n = ts_.expect_ident("equation variable");
            if (Alphabet::is_reserved(n) || alpha_.find(n)) ts_.fail_at(name, "'" + n + "' cannot name a variable");
            if (std::find(names.begin(), names.end(), n) != names.end())
                ts_.fail_at(name, "variable '" + n + "' defined twice");
            ts_.expect_punct("=");
            names.push_back(n);
            bodies.push_back(parse_sum());
            if (!ts_.accept_punct(";")) break;
        }
        ts_.expect_punct("}");
        if (names.empty()) ts_.fail_at(kw, "empty recursive specification");
        std::optional<Token> tail;
        if (ts_.accept_punct("@")) {
            tail = ts_.peek();
            ts_.expect_ident("variable after '@'");
        }
        if (head && tail && head->text != tail->text)
            ts_.fail_at(*tail, "rec selects '" + head->text + "' and '" + tail->text + "'");
        std::uint32_t selected = 0;
        if (auto pick = tail ? tail : head) {
            auto it = std::find(names.begin(), names.end(), pick->text);
            if (it == names.end()) ts_.fail_at(*pick, "'" + pick->text + "' is not defined in this rec");
            selected = static_cast<std::uint32_t>(it - names.begin());
        }
        for (auto& b : bodies) b = abstract_names(b, names);
        return rec(std::move(bodies), selected);
    }

    ActionSet parse_set() {
        ts_.expect_punct("{");
        ActionSet s;
        if (!ts_.at_punct("}")) {
            do s.insert(action(ts_.expect_ident("action")));
            while (ts_.accept_punct(","));
        }
        ts_.expect_punct("}");
        return s;
    }

    Action action(const std::string& name) {
        if (auto a = alpha_.find(name)) return *a;
        throw ParseError("undeclared action '" + name + "'", ts_.peek().line, ts_.peek().column);
    }

    TokenStream& ts_;
    const Alphabet& alpha_;
};

Term resolve_processes(Term t, const ProcessTable* env) {
    if (!env || !t->has_var) return t;
    std::map<std::string, Term> binding;
    for (const auto& name : free_variables(t))
        for (const auto& [pname, body] : *env)
            if (pname == name) binding[name] = body;
    return binding.empty() ? t : substitute(t, binding);
}

}  // namespace

Term parse_process(std::string_view text, const Alphabet& alpha, const ProcessTable* env) {
    TokenStream ts(detail::tokenize(text));
    Parser p(ts, alpha);
    Term t = p.parse_sum();
    if (!ts.at_end()) ts.fail("unexpected trailing input");
    return resolve_processes(t, env);
}

Term SpecFile::lookup(std::string_view name) const {
    for (const auto& [n, t] : processes)
        if (n == name) return t;
    throw std::invalid_argument("unknown process '" + std::string(name) + "'");
}

SpecFile parse_spec(std::string_view text, const Alphabet* base) {
    SpecFile out;
    if (base) out.alphabet = *base;
    TokenStream ts(detail::tokenize(text));
    while (!ts.at_end()) {
        if (ts.at_word("alphabet")) {
            ts.next();
            ts.expect_punct("{");
            if (!ts.at_punct("}")) {
                do {
                    Token name = ts.peek();
                    std::string n = ts.expect_ident("action name");
                    try {
                        out.alphabet.add(n);
                    } catch (const std::invalid_argument& e) {
                        ts.fail_at(name, e.what());
                    }
                } while (ts.accept_punct(","));
            }
            ts.expect_punct("}");
        } else if (ts.at_word("process")) {
            ts.next();
            Token name = ts.peek();
            std::string n = ts.expect_ident("process name");
            if (Alphabet::is_reserved(n) || out.alphabet.find(n))
                ts.fail_at(name, "'" + n + "' cannot name a process");
            for (const auto& [existing, _] : out.processes)
                if (existing == n) ts.fail_at(name, "process '" + n + "' defined twice");
            ts.expect_punct("=");
            Parser p(ts, out.alphabet);
            Term body = p.parse_sum();
            if (!ts.at_end() && !ts.at_word("process") && !ts.at_word("alphabet"))
                ts.fail("expected 'process', 'alphabet' or end of input");
            // A process mentioning its own name is read as a recursive definition.
            auto fv = free_variables(body);
            if (fv.count(n)) body = rec({abstract_names(body, {n})}, 0);
            out.processes.emplace_back(n, resolve_processes(body, &out.processes));
        } else {
            ts.fail("expected 'alphabet' or 'process'");
        }
    }
    return out;
}

}  // namespace tocsp
