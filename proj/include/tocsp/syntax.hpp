#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tocsp/term.hpp"

namespace tocsp {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, int line, int column)
        : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
          line(line), column(column) {}
    int line;
    int column;
};

// Named process definitions, in declaration order.
using ProcessTable = std::vector<std::pair<std::string, Term>>;

struct SpecFile {
    Alphabet alphabet;
    ProcessTable processes;

    Term lookup(std::string_view name) const;
};

// Grammar (loosest first):
//   sum   := par ('+' par)*
//   par   := unary (('|[' acts ']|' | '||') unary)*          left associative
//   unary := label '.' unary | 'hide' set 'in' unary | 'rename' '{' pairs '}' unary
//          | 'theta' set [set] unary | 'psi' set unary | atom
//   atom  := '0' | ident | '(' sum ')' | 'rec' [ident] '{' ident '=' sum (';' ident '=' sum)* [';'] '}' ['@' ident]
// Identifiers resolve to an enclosing rec binder, then to a process in `env`, then to a free variable.
Term parse_process(std::string_view text, const Alphabet& alpha, const ProcessTable* env = nullptr);

// Parses `alphabet {..}` and `process N = ...` declarations. Actions are declared
// in `base` first when given, so several files can share one alphabet.
SpecFile parse_spec(std::string_view text, const Alphabet* base = nullptr);

std::set<std::string> free_variables(Term t);
bool is_valid(Term t);
bool is_guarded(Term t);

// Simultaneous substitution for named free variables.
Term substitute(Term t, const std::map<std::string, Term>& binding);

// ⟨S_x|S⟩ for a rec node; the result is cached on the node.
Term unfold(Term rec_node);

// Upper bound on the nesting of rec unfoldings needed before every
// recursive call sits under a prefix. Only meaningful for guarded terms.
std::uint32_t unfolding_measure(Term t);

// De Bruijn helpers, exposed for the axiom and minimize modules.
Term shift(Term t, std::int32_t by, std::uint32_t cutoff = 0);
// Replaces binder level `level` (relative to t) by the given closed-at-that-level terms.
Term instantiate(Term t, const std::vector<Term>& replacements, std::uint32_t level = 0);

}  // namespace tocsp
