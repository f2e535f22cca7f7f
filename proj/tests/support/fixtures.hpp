#pragma once

#include <string>
#include <vector>

#include "tocsp/modal.hpp"

namespace tocsp::testing {

// Alphabet {a, b}: a = 0, b = 1.
const Alphabet& ab();

// The pair of systems with P, Q, R, S := 0.
Term illustration_left();
Term illustration_right();

// The environment-modality formulas on the illustration pair as printed, and under the complement reading of the environment sets.
std::vector<std::string> illustration_positive_literal();
std::vector<std::string> illustration_negative_literal();
std::vector<std::string> illustration_positive_complement();
std::vector<std::string> illustration_negative_complement();

// Truncation of the uncountable family: `units` τ-units, bit k of `dashed` selects
// the dashed b-transition in unit k (otherwise the dotted one).
Term branching_family(int units, unsigned dashed);

}  // namespace tocsp::testing
