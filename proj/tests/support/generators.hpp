#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "tocsp/equiv.hpp"

namespace tocsp::testing {

using Rng = std::mt19937_64;

struct GenConfig {
    int actions = 3;          // visible actions 0..actions-1
    int depth = 3;            // syntactic depth budget
    bool timeouts = true;
    bool recursion = true;
    bool operators = true;    // par, hide, rename, theta, psi
};

// Closed, valid, guarded term.
Term random_term(Rng& rng, const GenConfig& cfg);

// Recursion-free term over prefixes, choice, and (if cfg.operators) the static operators.
Term random_recfree(Rng& rng, const GenConfig& cfg);

// rec x_0 { x_i = Σ α.x_j } @ x_0 with `states` equations: an arbitrary finite LTS shape.
Term random_lts_term(Rng& rng, int states, int actions, int max_out = 3, bool timeouts = true);

// A random one-hole context, applied to a closed term.
using Context = std::function<Term(Term)>;
Context random_context(Rng& rng, const GenConfig& cfg, std::string* description = nullptr);

// Random guarded specification: bodies refer to each other only under prefixes.
struct RecSpec {
    std::vector<Term> bodies;  // bvar(0, j) refers to x_j
};
RecSpec random_spec(Rng& rng, int equations, const GenConfig& cfg);

ActionSet random_set(Rng& rng, int actions);
Label random_label(Rng& rng, int actions, bool timeouts);

// Number of reachable states, or SIZE_MAX when above `cap`.
std::size_t reachable_states(Term t, std::size_t cap);

// Alphabet "a", "b", "c", ... of the given size.
Alphabet letters(int n);

}  // namespace tocsp::testing
