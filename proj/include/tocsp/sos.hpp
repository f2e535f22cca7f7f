#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "tocsp/term.hpp"

namespace tocsp {

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidTerm : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Move {
    Label label;
    Term target;

    friend bool operator==(const Move& a, const Move& b) { return a.label == b.label && a.target == b.target; }
    friend bool operator<(const Move& a, const Move& b) {
        if (a.label != b.label) return a.label < b.label;
        return a.target->id < b.target->id;
    }
};

// I(P) ⊆ A ∪ {τ}.
struct Initials {
    ActionSet visible;
    bool tau = false;

    bool blocked_by(ActionSet x) const { return !tau && !visible.intersects(x); }  // I ∩ (X ∪ {τ}) = ∅
    friend bool operator==(const Initials&, const Initials&) = default;
};

// Table-driven transition derivation with memoization. Negative premises are
// answered by `initials`, which recurses only into strict subterms or unfoldings.
class Semantics {
public:
    static constexpr std::uint32_t kDefaultUnfoldBudget = 1000;

    explicit Semantics(std::uint32_t unfold_budget = kDefaultUnfoldBudget) : budget_(unfold_budget) {}

    const Initials& initials(Term t);
    const std::vector<Move>& transitions(Term t);

    void clear();

private:
    const Initials& initials_at(Term t, std::uint32_t unfolds);
    const std::vector<Move>& transitions_at(Term t, std::uint32_t unfolds);

    std::uint32_t budget_;
    std::unordered_map<Term, Initials> init_;
    std::unordered_map<Term, std::vector<Move>> trans_;
};

// Per-thread shared instance used by the free functions below.
Semantics& default_semantics();

// Both reject terms that are open or invalid.
Initials initials(Term t);
std::vector<Move> derive_transitions(Term t);
void require_closed_valid(Term t);

struct Lts {
    std::vector<Term> states;
    std::vector<std::uint32_t> offsets;  // transitions of state i: [offsets[i], offsets[i+1])
    std::vector<Label> labels;
    std::vector<std::uint32_t> targets;
    std::vector<std::uint32_t> roots;
    bool complete = true;

    std::size_t size() const { return states.size(); }
    std::size_t transition_count() const { return targets.size(); }
    std::uint32_t begin(std::uint32_t s) const { return offsets[s]; }
    std::uint32_t end(std::uint32_t s) const { return offsets[s + 1]; }
    std::uint32_t find(Term t) const;  // index or UINT32_MAX
};

inline constexpr std::size_t kDefaultMaxStates = 100000;

// Breadth-first closure of `roots`. One root index per input, in order; equal inputs share a state.
Lts explore(const std::vector<Term>& roots, std::size_t max_states = kDefaultMaxStates,
            Semantics* sem = nullptr);

ActionSet relevant_alphabet(const Lts& lts);

std::string lts_to_text(const Lts& lts, const Alphabet& alpha);
std::string lts_to_dot(const Lts& lts, const Alphabet& alpha);

}  // namespace tocsp
