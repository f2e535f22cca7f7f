#pragma once

#include <cstdint>
#include <vector>

#include "tocsp/equiv.hpp"

namespace tocsp {

// Block per state, numbered in order of each block's least state index.
struct Partition {
    std::vector<std::uint32_t> block_of;
    std::size_t blocks = 0;
};

// ↔_r classes of the states of a complete LTS.
Partition reactive_partition(const Lts& lts, const CheckOptions& opts = {});

struct CanonicalLts {
    std::vector<std::vector<std::uint32_t>> classes;  // source state ids, ascending
    std::vector<std::uint32_t> representative;        // χ: least member of each class
    std::vector<std::uint32_t> class_of;              // per source state
    std::vector<std::vector<std::pair<Label, std::uint32_t>>> transitions;  // read off χ only; sorted, unique
    std::vector<std::uint32_t> root_classes;
    std::vector<Term> representative_terms;

    std::size_t size() const { return classes.size(); }
};

CanonicalLts quotient(const Lts& lts, const Partition& partition);

// ⟨x_0|S⟩ with one equation per class reachable from root_class, in BFS order.
Term to_recspec(const CanonicalLts& canon, std::uint32_t root_class);

// Explore, partition and quotient in one go. Several roots share one quotient.
CanonicalLts minimize(const std::vector<Term>& roots, const CheckOptions& opts = {});

// Label-preserving isomorphism of the parts reachable from the two roots.
bool rooted_isomorphic(const CanonicalLts& a, std::uint32_t root_a, const CanonicalLts& b, std::uint32_t root_b);

std::string canonical_to_text(const CanonicalLts& canon, const Alphabet& alpha);

}  // namespace tocsp
