#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tocsp/syntax.hpp"

namespace tocsp::detail {

enum class Tok { Ident, Zero, Punct, End };

struct Token {
    Tok kind;
    std::string text;
    int line;
    int column;
};

// Shared tokenizer for process terms, spec files and formulas.
// Multi-character punctuation: "|[", "]|", "||", "&&". Comments run from "--" to end of line.
std::vector<Token> tokenize(std::string_view text);

class TokenStream {
public:
    explicit TokenStream(std::vector<Token> toks) : toks_(std::move(toks)) {}

    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = pos_ + ahead;
        return i < toks_.size() ? toks_[i] : toks_.back();
    }
    const Token& next() {
        const Token& t = peek();
        if (pos_ < toks_.size() - 1) ++pos_;
        return t;
    }
    bool at_punct(std::string_view p, std::size_t ahead = 0) const {
        const Token& t = peek(ahead);
        return t.kind == Tok::Punct && t.text == p;
    }
    bool at_word(std::string_view w, std::size_t ahead = 0) const {
        const Token& t = peek(ahead);
        return t.kind == Tok::Ident && t.text == w;
    }
    bool accept_punct(std::string_view p) {
        if (!at_punct(p)) return false;
        next();
        return true;
    }
    void expect_punct(std::string_view p) {
        if (!accept_punct(p)) fail("expected '" + std::string(p) + "'");
    }
    std::string expect_ident(const char* what) {
        if (peek().kind != Tok::Ident) fail(std::string("expected ") + what);
        return next().text;
    }
    bool at_end() const { return peek().kind == Tok::End; }

    [[noreturn]] void fail(const std::string& msg) const {
        const Token& t = peek();
        std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
        throw ParseError(msg + ", found " + found, t.line, t.column);
    }
    [[noreturn]] void fail_at(const Token& t, const std::string& msg) const {
        throw ParseError(msg, t.line, t.column);
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

}  // namespace tocsp::detail
