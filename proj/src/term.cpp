#include "tocsp/term.hpp"

#include <algorithm>
#include <memory>
#include <mutex>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace tocsp {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::size_t structural_hash(const Node& n) {
    std::size_t h = static_cast<std::size_t>(n.op);
    h = mix(h, static_cast<std::size_t>(n.label.code()));
    h = mix(h, n.set.bits());
    h = mix(h, n.upper.bits());
    for (auto [a, b] : n.pairs) h = mix(h, (std::size_t{a} << 8) | b);
    for (Term k : n.kids) h = mix(h, k->id);
    h = mix(h, std::hash<std::string>{}(n.name));
    h = mix(h, n.depth);
    h = mix(h, n.index);
    return h;
}

bool structural_equal(const Node& x, const Node& y) {
    return x.op == y.op && x.label == y.label && x.set == y.set && x.upper == y.upper && x.pairs == y.pairs &&
           x.kids == y.kids && x.name == y.name && x.depth == y.depth && x.index == y.index;
}

struct NodeHash {
    using is_transparent = void;
    std::size_t operator()(const std::unique_ptr<Node>& n) const { return n->hash; }
    std::size_t operator()(const Node* n) const { return n->hash; }
};
struct NodeEq {
    using is_transparent = void;
    bool operator()(const std::unique_ptr<Node>& a, const std::unique_ptr<Node>& b) const {
        return structural_equal(*a, *b);
    }
    bool operator()(const Node* a, const std::unique_ptr<Node>& b) const { return structural_equal(*a, *b); }
    bool operator()(const std::unique_ptr<Node>& a, const Node* b) const { return structural_equal(*a, *b); }
};

struct Table {
    std::mutex mu;
    std::unordered_set<std::unique_ptr<Node>, NodeHash, NodeEq> nodes;
    std::uint64_t next_id = 1;
};

Table& table() {
    static Table* t = new Table;  // intentionally leaked; terms live for the whole process
    return *t;
}

void fill_derived(Node& n) {
    std::uint32_t loose = 0;
    std::uint64_t size = 1;
    bool has_var = false, has_rec = n.op == Op::Rec, valid = true;
    for (Term k : n.kids) {
        loose = std::max(loose, k->loose);
        size += k->size;
        has_var |= k->has_var;
        has_rec |= k->has_rec;
        valid &= k->valid;
    }
    switch (n.op) {
    case Op::BVar: loose = n.depth + 1; break;
    case Op::Rec: loose = loose > 0 ? loose - 1 : 0; break;
    case Op::Var: has_var = true; break;
    case Op::Theta:
    case Op::Psi: valid &= n.kids[0]->loose == 0; break;
    default: break;
    }
    n.loose = loose;
    n.size = static_cast<std::uint32_t>(std::min<std::uint64_t>(size, 0xffffffffu));
    n.has_var = has_var;
    n.has_rec = has_rec;
    n.valid = valid;
}

Term intern(std::unique_ptr<Node> n) {
    fill_derived(*n);
    n->hash = structural_hash(*n);
    auto& t = table();
    std::lock_guard lock(t.mu);
    if (auto it = t.nodes.find(n.get()); it != t.nodes.end()) return it->get();
    n->id = t.next_id++;
    Term out = n.get();
    t.nodes.insert(std::move(n));
    return out;
}

std::unique_ptr<Node> make(Op op) {
    auto n = std::make_unique<Node>();
    n->op = op;
    return n;
}

}  // namespace

Term nil() {
    static Term z = intern(make(Op::Nil));
    return z;
}

Term prefix(Label l, Term body) {
    auto n = make(Op::Prefix);
    n->label = l;
    n->kids = {body};
    return intern(std::move(n));
}

Term choice(Term l, Term r) {
    auto n = make(Op::Choice);
    n->kids = {l, r};
    return intern(std::move(n));
}

Term sum(const std::vector<Term>& s) {
    if (s.empty()) return nil();
    Term acc = s.back();
    for (std::size_t i = s.size() - 1; i-- > 0;) acc = choice(s[i], acc);
    return acc;
}

Term par(ActionSet sync, Term l, Term r) {
    auto n = make(Op::Par);
    n->set = sync;
    n->kids = {l, r};
    return intern(std::move(n));
}

Term hide(ActionSet hidden, Term body) {
    auto n = make(Op::Hide);
    n->set = hidden;
    n->kids = {body};
    return intern(std::move(n));
}

Term rename(RenamePairs pairs, Term body) {
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    auto n = make(Op::Rename);
    n->pairs = std::move(pairs);
    n->kids = {body};
    return intern(std::move(n));
}

Term theta(ActionSet lower, ActionSet upper, Term body) {
    if (!lower.subset_of(upper)) throw std::invalid_argument("theta: lower set is not contained in upper set");
    auto n = make(Op::Theta);
    n->set = lower;
    n->upper = upper;
    n->kids = {body};
    return intern(std::move(n));
}

Term psi(ActionSet env, Term body) {
    auto n = make(Op::Psi);
    n->set = env;
    n->kids = {body};
    return intern(std::move(n));
}

Term var(std::string name) {
    auto n = make(Op::Var);
    n->name = std::move(name);
    return intern(std::move(n));
}

Term bvar(std::uint32_t depth, std::uint32_t index) {
    auto n = make(Op::BVar);
    n->depth = depth;
    n->index = index;
    return intern(std::move(n));
}

Term rec(std::vector<Term> bodies, std::uint32_t selected) {
    if (bodies.empty()) throw std::invalid_argument("rec: empty specification");
    if (selected >= bodies.size()) throw std::invalid_argument("rec: selected variable out of range");
    auto n = make(Op::Rec);
    n->kids = std::move(bodies);
    n->index = selected;
    return intern(std::move(n));
}

Term rebuild(Term t, std::vector<Term> kids) {
    if (kids == t->kids) return t;
    auto n = make(t->op);
    n->label = t->label;
    n->set = t->set;
    n->upper = t->upper;
    n->pairs = t->pairs;
    n->name = t->name;
    n->depth = t->depth;
    n->index = t->index;
    n->kids = std::move(kids);
    return intern(std::move(n));
}

Term with_selected(Term r, std::uint32_t selected) {
    if (r->op != Op::Rec) throw std::invalid_argument("with_selected: not a rec node");
    if (r->index == selected) return r;
    return rec(r->kids, selected);
}

std::vector<Term> summands(Term t) {
    std::vector<Term> out;
    while (t->op == Op::Choice) {
        out.push_back(t->kids[0]);
        t = t->kids[1];
    }
    if (t->op != Op::Nil || out.empty()) out.push_back(t);
    if (out.size() == 1 && out[0]->op == Op::Nil) out.clear();
    return out;
}

std::size_t interned_count() {
    auto& t = table();
    std::lock_guard lock(t.mu);
    return t.nodes.size();
}

// ---------------------------------------------------------------- printing

namespace {

void collect_free_names(Term t, std::set<std::string>& out, std::unordered_set<Term>& seen) {
    if (!t->has_var || !seen.insert(t).second) return;
    if (t->op == Op::Var) out.insert(t->name);
    for (Term k : t->kids) collect_free_names(k, out, seen);
}

class Printer {
public:
    Printer(const Alphabet& alpha, std::set<std::string> taken) : alpha_(alpha), taken_(std::move(taken)) {
        for (const auto& n : alpha.names()) taken_.insert(n);
    }

    void emit(Term t, int level) {
        int own = t->op == Op::Choice ? 0 : t->op == Op::Par ? 1 : 2;
        bool wrap = own < level;
        if (wrap) out_ += '(';
        body(t);
        if (wrap) out_ += ')';
    }

    std::string out_;

private:
    void body(Term t) {
        switch (t->op) {
        case Op::Nil: out_ += '0'; break;
        case Op::Prefix:
            out_ += alpha_.label_name(t->label);
            out_ += '.';
            emit(t->kids[0], 2);
            break;
        case Op::Choice:
            emit(t->kids[0], 1);
            out_ += " + ";
            emit(t->kids[1], 0);
            break;
        case Op::Par:
            emit(t->kids[0], 1);
            out_ += t->set.empty() ? " || " : " |[" + set_body(t->set) + "]| ";
            emit(t->kids[1], 2);
            break;
        case Op::Hide:
            out_ += "hide " + alpha_.format(t->set) + " in ";
            emit(t->kids[0], 2);
            break;
        case Op::Rename: {
            out_ += "rename{";
            bool first = true;
            for (auto [a, b] : t->pairs) {
                if (!first) out_ += ',';
                first = false;
                out_ += "(" + alpha_.label_name(Label::visible(a)) + "," + alpha_.label_name(Label::visible(b)) + ")";
            }
            out_ += "}(";
            emit(t->kids[0], 0);
            out_ += ')';
            break;
        }
        case Op::Theta:
            out_ += "theta" + alpha_.format(t->set) + alpha_.format(t->upper) + "(";
            emit(t->kids[0], 0);
            out_ += ')';
            break;
        case Op::Psi:
            out_ += "psi" + alpha_.format(t->set) + "(";
            emit(t->kids[0], 0);
            out_ += ')';
            break;
        case Op::Var: out_ += t->name; break;
        case Op::BVar:
            if (t->depth < scopes_.size())
                out_ += scopes_[scopes_.size() - 1 - t->depth][t->index];
            else
                out_ += "#" + std::to_string(t->depth - scopes_.size()) + "." + std::to_string(t->index);
            break;
        case Op::Rec: {
            std::vector<std::string> names;
            for (std::size_t i = 0; i < t->kids.size(); ++i) names.push_back(fresh());
            scopes_.push_back(names);
            out_ += "rec " + names[t->index] + " { ";
            for (std::size_t i = 0; i < t->kids.size(); ++i) {
                if (i) out_ += "; ";
                out_ += names[i] + " = ";
                emit(t->kids[i], 0);
            }
            out_ += " } @ " + names[t->index];
            scopes_.pop_back();
            for (const auto& n : names) in_scope_.erase(n);
            break;
        }
        }
    }

    std::string set_body(ActionSet s) const {
        auto f = alpha_.format(s);
        return f.substr(1, f.size() - 2);
    }

    std::string fresh() {
        static const char* base[] = {"x", "y", "z", "w", "u", "v"};
        for (std::size_t k = 0;; ++k) {
            std::string cand = base[k % 6];
            if (k >= 6) cand += std::to_string(k / 6);
            if (taken_.count(cand) || in_scope_.count(cand) || Alphabet::is_reserved(cand)) continue;
            in_scope_.insert(cand);
            return cand;
        }
    }

    const Alphabet& alpha_;
    std::set<std::string> taken_;
    std::set<std::string> in_scope_;
    std::vector<std::vector<std::string>> scopes_;
};

}  // namespace

std::string print(Term t, const Alphabet& alpha) {
    std::set<std::string> free;
    std::unordered_set<Term> seen;
    collect_free_names(t, free, seen);
    Printer p(alpha, std::move(free));
    p.emit(t, 0);
    return std::move(p.out_);
}

}  // namespace tocsp
