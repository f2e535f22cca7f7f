#include "lexer.hpp"

#include <cctype>

namespace tocsp::detail {

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '-' && i + 1 < text.size() && text[i + 1] == '-') {
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        int l = line, cl = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_' ||
                                       text[j] == '\''))
                ++j;
            out.push_back({Tok::Ident, std::string(text.substr(i, j - i)), l, cl});
            advance(j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            auto num = text.substr(i, j - i);
            if (num != "0") throw ParseError("unexpected number '" + std::string(num) + "'", l, cl);
            out.push_back({Tok::Zero, "0", l, cl});
            advance(j - i);
            continue;
        }
        static constexpr std::string_view two[] = {"|[", "]|", "||", "&&"};
        bool matched = false;
        for (auto p : two) {
            if (text.substr(i, 2) == p) {
                out.push_back({Tok::Punct, std::string(p), l, cl});
                advance(2);
                matched = true;
                break;
            }
        }
        if (matched) continue;
        static constexpr std::string_view one = ".+(){}[],;=@<>!";
        if (one.find(c) != std::string_view::npos) {
            out.push_back({Tok::Punct, std::string(1, c), l, cl});
            advance(1);
            continue;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", l, cl);
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

}  // namespace tocsp::detail
