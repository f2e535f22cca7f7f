#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tocsp {

using Action = std::uint8_t;
inline constexpr int kMaxActions = 64;

// Finite set of visible actions, one bit per declared action.
class ActionSet {
public:
    constexpr ActionSet() = default;
    constexpr explicit ActionSet(std::uint64_t bits) : bits_(bits) {}

    static ActionSet single(Action a) { return ActionSet(std::uint64_t{1} << a); }
    static ActionSet first_n(int n) {
        return ActionSet(n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1));
    }

    constexpr std::uint64_t bits() const { return bits_; }
    bool contains(Action a) const { return (bits_ >> a) & 1u; }
    bool empty() const { return bits_ == 0; }
    int size() const { return std::popcount(bits_); }
    bool subset_of(ActionSet o) const { return (bits_ & ~o.bits_) == 0; }
    bool intersects(ActionSet o) const { return (bits_ & o.bits_) != 0; }

    void insert(Action a) { bits_ |= std::uint64_t{1} << a; }
    void erase(Action a) { bits_ &= ~(std::uint64_t{1} << a); }

    friend ActionSet operator|(ActionSet x, ActionSet y) { return ActionSet(x.bits_ | y.bits_); }
    friend ActionSet operator&(ActionSet x, ActionSet y) { return ActionSet(x.bits_ & y.bits_); }
    friend ActionSet operator-(ActionSet x, ActionSet y) { return ActionSet(x.bits_ & ~y.bits_); }
    friend bool operator==(ActionSet x, ActionSet y) = default;
    friend auto operator<=>(ActionSet x, ActionSet y) = default;

    std::vector<Action> elements() const {
        std::vector<Action> out;
        for (std::uint64_t b = bits_; b; b &= b - 1) out.push_back(static_cast<Action>(std::countr_zero(b)));
        return out;
    }

    // All subsets of this set, in increasing bitmask order.
    std::vector<ActionSet> subsets() const;

private:
    std::uint64_t bits_ = 0;
};

// Transition labels: visible actions use their index, then tau, then the time-out.
class Label {
public:
    static constexpr int kTau = kMaxActions;
    static constexpr int kTimeout = kMaxActions + 1;

    constexpr Label() = default;
    static constexpr Label visible(Action a) { return Label(a); }
    static constexpr Label tau() { return Label(kTau); }
    static constexpr Label timeout() { return Label(kTimeout); }

    constexpr int code() const { return code_; }
    constexpr bool is_visible() const { return code_ < kMaxActions; }
    constexpr bool is_tau() const { return code_ == kTau; }
    constexpr bool is_timeout() const { return code_ == kTimeout; }
    Action action() const {
        if (!is_visible()) throw std::logic_error("label has no visible action");
        return static_cast<Action>(code_);
    }

    friend constexpr bool operator==(Label, Label) = default;
    friend constexpr auto operator<=>(Label, Label) = default;

private:
    constexpr explicit Label(int c) : code_(c) {}
    int code_ = kTau;
};

class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(const std::vector<std::string>& names);

    // Returns the index of name, declaring it if new. Throws on reserved words.
    Action add(std::string_view name);
    std::optional<Action> find(std::string_view name) const;
    Action at(std::string_view name) const;
    const std::string& name(Action a) const { return names_.at(a); }
    int size() const { return static_cast<int>(names_.size()); }
    ActionSet all() const { return ActionSet::first_n(size()); }
    const std::vector<std::string>& names() const { return names_; }

    std::string label_name(Label l) const;
    // "{a,b}" in index order.
    std::string format(ActionSet s) const;
    ActionSet parse_list(std::string_view csv) const;

    static bool is_reserved(std::string_view name);

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, Action> index_;
};

}  // namespace tocsp
