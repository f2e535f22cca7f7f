#include "modal_oracle.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace tocsp::testing {

ModalOracle::ModalOracle(const std::vector<Term>& roots, std::size_t max_states) {
    lts_ = explore(roots, max_states);
    if (!lts_.complete) throw std::runtime_error("oracle: state space too large");
    for (std::size_t k = 0; k < lts_.labels.size(); ++k)
        if (lts_.labels[k].is_visible()) relevant_.insert(lts_.labels[k].action());
    envs_ = relevant_.subsets();
    const std::size_t n = lts_.size(), modes = envs_.size() + 1;
    // Initial actions are read off the transitions directly.
    std::vector<ActionSet> vis(n);
    std::vector<bool> tau(n, false);
    for (std::uint32_t s = 0; s < n; ++s)
        for (auto k = lts_.begin(s); k < lts_.end(s); ++k) {
            if (lts_.labels[k].is_visible()) vis[s].insert(lts_.labels[k].action());
            if (lts_.labels[k].is_tau()) tau[s] = true;
        }
    auto blocked = [&](std::uint32_t s, std::size_t e) { return !tau[s] && !vis[s].intersects(envs_[e]); };

    // Modality codes: label codes for ⟨α⟩, 100 + e for ⟨X_e⟩.
    using Fact = std::pair<int, std::uint32_t>;
    block_.assign(n * modes, 0);
    std::size_t count = 1;
    for (;;) {
        auto plain_facts = [&](std::uint32_t s) {
            std::vector<Fact> f;
            for (auto k = lts_.begin(s); k < lts_.end(s); ++k) {
                Label l = lts_.labels[k];
                if (!l.is_timeout()) f.emplace_back(l.code(), block_[lts_.targets[k] * modes]);
            }
            for (std::size_t e = 0; e < envs_.size(); ++e) {
                if (!blocked(s, e)) continue;
                for (auto k = lts_.begin(s); k < lts_.end(s); ++k)
                    if (lts_.labels[k].is_timeout())
                        f.emplace_back(100 + static_cast<int>(e), block_[lts_.targets[k] * modes + 1 + e]);
            }
            return f;
        };
        std::map<std::pair<std::uint32_t, std::vector<Fact>>, std::uint32_t> ids;
        std::vector<std::uint32_t> next(n * modes);
        for (std::uint32_t s = 0; s < n; ++s)
            for (std::size_t m = 0; m < modes; ++m) {
                std::vector<Fact> f;
                if (m == 0) {
                    f = plain_facts(s);
                } else {
                    std::size_t e = m - 1;
                    if (blocked(s, e)) {
                        f = plain_facts(s);  // escape clause: ⊨_X agrees with ⊨
                    } else {
                        for (auto k = lts_.begin(s); k < lts_.end(s); ++k) {
                            Label l = lts_.labels[k];
                            if (l.is_visible() && envs_[e].contains(l.action()))
                                f.emplace_back(l.code(), block_[lts_.targets[k] * modes]);
                            else if (l.is_tau())
                                f.emplace_back(l.code(), block_[lts_.targets[k] * modes + m]);
                        }
                    }
                }
                std::sort(f.begin(), f.end());
                f.erase(std::unique(f.begin(), f.end()), f.end());
                auto key = std::make_pair(block_[s * modes + m], std::move(f));
                auto it = ids.emplace(std::move(key), static_cast<std::uint32_t>(ids.size())).first;
                next[s * modes + m] = it->second;
            }
        block_ = std::move(next);
        if (ids.size() == count) break;
        count = ids.size();
        ++rounds_;
    }
}

std::uint32_t ModalOracle::slot(Term t, std::size_t mode) const {
    std::uint32_t s = lts_.find(t);
    if (s == UINT32_MAX) throw std::invalid_argument("oracle: term not among the explored states");
    return block_[s * (envs_.size() + 1) + mode];
}

bool ModalOracle::same(Term p, Term q) const { return slot(p, 0) == slot(q, 0); }

bool ModalOracle::same_env(Term p, ActionSet x, Term q) const {
    ActionSet y = x & relevant_;
    auto e = static_cast<std::size_t>(std::find(envs_.begin(), envs_.end(), y) - envs_.begin());
    return slot(p, e + 1) == slot(q, e + 1);
}

}  // namespace tocsp::testing
