#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tocsp/modal.hpp"
#include "tocsp/sos.hpp"

namespace tocsp {

class InstanceTooLarge : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kDefaultEnvLimit = 12;

struct CheckOptions {
    std::size_t max_states = kDefaultMaxStates;
    int env_limit = kDefaultEnvLimit;
    std::optional<std::uint64_t> shuffle_seed;  // worklist order; the result must not depend on it
    bool explain = false;                       // build a distinguishing formula on failure
    bool certify = false;                       // dump a relation on success
};

enum class Relation { Strong, Reactive, Initials, XBisim };
const char* relation_name(Relation r);

// A relation that should satisfy the clauses of the named equivalence.
// For reactive relations the environment sets range over subsets of `env_alphabet`.
struct Certificate {
    Relation relation = Relation::Reactive;
    ActionSet env_alphabet;
    std::vector<std::pair<Term, Term>> pairs;
};

struct Verdict {
    bool equivalent = false;
    std::optional<Formula> formula;
    std::optional<Certificate> certificate;
};

// Plain states reachable from the roots, followed by θ_X(s) for every plain s
// and every X ⊆ J (J the relevant alphabet). Closed under transitions.
class ReactiveClosure {
public:
    static ReactiveClosure build(const std::vector<Term>& roots, const CheckOptions& opts = {});

    Lts lts;
    std::size_t plain = 0;
    ActionSet relevant;
    std::vector<ActionSet> envs;  // canonical environments, increasing bitmask order

    std::uint32_t wrapped(std::uint32_t plain_state, std::size_t env) const {
        return wrap_[plain_state * envs.size() + env];
    }
    std::size_t env_index(ActionSet x) const;  // x is intersected with `relevant` first
    std::uint32_t index_of(Term t) const;      // UINT32_MAX if absent

private:
    std::vector<std::uint32_t> wrap_;
    std::unordered_map<Term, std::uint32_t> index_;
};

// Greatest strong time-out bisimulation on a closure.
class ReactiveRelation {
public:
    explicit ReactiveRelation(const ReactiveClosure& c, std::optional<std::uint64_t> shuffle_seed = std::nullopt);

    bool related(std::uint32_t p, std::uint32_t q) const { return rel_[p * n_ + q]; }
    const ReactiveClosure& closure() const { return c_; }

    // Pairs reachable from (p,q) through the matching clauses; the symmetric closure
    // is itself a time-out bisimulation.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> witness(std::uint32_t p, std::uint32_t q) const;

private:
    const ReactiveClosure& c_;
    std::size_t n_;
    std::vector<std::uint8_t> rel_;
};

// Block index per state of the coarsest strong bisimulation (all labels, t included).
std::vector<std::uint32_t> strong_partition(const Lts& lts);

Verdict initials_eq(Term p, Term q);
Verdict strong_bisim(Term p, Term q, const CheckOptions& opts = {});
Verdict reactive_bisim(Term p, Term q, const CheckOptions& opts = {});
Verdict x_bisim(Term p, ActionSet x, Term q, const CheckOptions& opts = {});

// Direct search for a generalised reactive bisimulation over pairs and
// environment triples of plain states. Independent of the θ construction.
inline constexpr std::size_t kDefaultOracleBound = 8;
Verdict brute_force_gsrb(Term p, Term q, std::optional<ActionSet> x = std::nullopt,
                         std::size_t max_plain_states = kDefaultOracleBound);

// φ with p ⊨ φ and q ⊭ φ, or nothing when p ↔_r q.
std::optional<Formula> distinguishing_formula(Term p, Term q, const CheckOptions& opts = {});

// Empty string when the certificate checks out, otherwise the first problem found.
// `root` must be one of the certificate's pairs.
std::string verify_certificate(const Certificate& cert, std::pair<Term, Term> root);

}  // namespace tocsp
