#include "tocsp/alphabet.hpp"

#include <array>
#include <cctype>

namespace tocsp {

std::vector<ActionSet> ActionSet::subsets() const {
    std::vector<ActionSet> out;
    out.reserve(std::size_t{1} << size());
    // Enumerate submasks upward: sub = (sub - bits) & bits walks them in increasing order.
    std::uint64_t sub = 0;
    do {
        out.emplace_back(sub);
        sub = (sub - bits_) & bits_;
    } while (sub != 0);
    return out;
}

Alphabet::Alphabet(const std::vector<std::string>& names) {
    for (const auto& n : names) add(n);
}

bool Alphabet::is_reserved(std::string_view name) {
    static constexpr std::array<std::string_view, 13> words = {
        "tau", "t", "rec", "hide", "in", "rename", "theta", "psi", "alphabet", "process", "true", "false", "0"};
    for (auto w : words)
        if (w == name) return true;
    return false;
}

static bool is_identifier(std::string_view s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'')) return false;
    return true;
}

Action Alphabet::add(std::string_view name) {
    if (auto a = find(name)) return *a;
    if (is_reserved(name)) throw std::invalid_argument("reserved word used as action: " + std::string(name));
    if (!is_identifier(name)) throw std::invalid_argument("not an identifier: '" + std::string(name) + "'");
    if (size() >= kMaxActions) throw std::invalid_argument("alphabet exceeds 64 actions");
    auto a = static_cast<Action>(names_.size());
    names_.emplace_back(name);
    index_.emplace(names_.back(), a);
    return a;
}

std::optional<Action> Alphabet::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Action Alphabet::at(std::string_view name) const {
    if (auto a = find(name)) return *a;
    throw std::invalid_argument("undeclared action: " + std::string(name));
}

std::string Alphabet::label_name(Label l) const {
    if (l.is_tau()) return "tau";
    if (l.is_timeout()) return "t";
    if (l.action() < names_.size()) return names_[l.action()];
    return "#" + std::to_string(l.action());
}

std::string Alphabet::format(ActionSet s) const {
    std::string out = "{";
    bool first = true;
    for (Action a : s.elements()) {
        if (!first) out += ',';
        first = false;
        out += a < names_.size() ? names_[a] : "#" + std::to_string(a);
    }
    return out + "}";
}

ActionSet Alphabet::parse_list(std::string_view csv) const {
    ActionSet out;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        auto comma = csv.find(',', pos);
        if (comma == std::string_view::npos) comma = csv.size();
        auto item = csv.substr(pos, comma - pos);
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) item.remove_prefix(1);
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.remove_suffix(1);
        if (!item.empty()) out.insert(at(item));
        pos = comma + 1;
    }
    return out;
}

}  // namespace tocsp
