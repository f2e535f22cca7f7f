#pragma once

#include <atomic>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tocsp/alphabet.hpp"

namespace tocsp {

enum class Op : std::uint8_t { Nil, Prefix, Choice, Par, Hide, Rename, Theta, Psi, Var, BVar, Rec };

using RenamePairs = std::vector<std::pair<Action, Action>>;

struct Node;
using Term = const Node*;

// Interned term node. Two structurally equal terms are the same pointer.
// Bound variables are de Bruijn pairs: `depth` counts enclosing rec binders
// to skip, `index` selects the equation of that binder.
struct Node {
    Op op = Op::Nil;
    Label label;             // Prefix
    ActionSet set;           // Par sync, Hide set, Theta lower, Psi env
    ActionSet upper;         // Theta upper
    RenamePairs pairs;       // Rename, sorted and unique
    std::vector<Term> kids;  // children; Rec: equation bodies
    std::string name;        // Var
    std::uint32_t depth = 0; // BVar
    std::uint32_t index = 0; // BVar equation, Rec selected equation

    // Derived data, filled in at interning time.
    std::uint64_t id = 0;         // creation serial; used for all ordering
    std::size_t hash = 0;
    std::uint32_t loose = 0;      // 1 + deepest binder referenced from outside, 0 if none
    std::uint32_t size = 1;       // node count with sharing expanded (saturating)
    bool has_var = false;         // contains a named free variable
    bool has_rec = false;
    bool valid = true;            // no theta/psi argument refers to an outer binder

    mutable std::atomic<const Node*> unfolded{nullptr};

    bool closed() const { return loose == 0 && !has_var; }
    Term kid(std::size_t i = 0) const { return kids[i]; }
};

struct TermIdLess {
    bool operator()(Term a, Term b) const { return a->id < b->id; }
};

// Factories. All return interned nodes.
Term nil();
Term prefix(Label l, Term body);
Term choice(Term l, Term r);
Term sum(const std::vector<Term>& summands);  // right-nested; empty sum is 0
Term par(ActionSet sync, Term l, Term r);
Term hide(ActionSet hidden, Term body);
Term rename(RenamePairs pairs, Term body);
Term theta(ActionSet lower, ActionSet upper, Term body);  // throws unless lower ⊆ upper
inline Term theta(ActionSet x, Term body) { return theta(x, x, body); }
Term psi(ActionSet env, Term body);
Term var(std::string name);
Term bvar(std::uint32_t depth, std::uint32_t index);
Term rec(std::vector<Term> bodies, std::uint32_t selected);

// Same node with the given children (and selected index for Rec).
Term rebuild(Term t, std::vector<Term> kids);
Term with_selected(Term rec_node, std::uint32_t selected);

// Flattens the right spine of a sum; 0 yields the empty list.
std::vector<Term> summands(Term t);

std::size_t interned_count();

std::string print(Term t, const Alphabet& alpha);

}  // namespace tocsp
