#include "tocsp/minimize.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <sstream>

namespace tocsp {

Partition reactive_partition(const Lts& lts, const CheckOptions& opts) {
    if (!lts.complete) throw BudgetExceeded("cannot partition an incomplete LTS");
    Partition part;
    part.block_of.assign(lts.size(), UINT32_MAX);
    if (lts.size() == 0) return part;
    auto c = ReactiveClosure::build(lts.states, opts);
    ReactiveRelation rel(c, opts.shuffle_seed);
    std::vector<std::uint32_t> idx(lts.size());
    for (std::uint32_t s = 0; s < lts.size(); ++s) idx[s] = c.index_of(lts.states[s]);
    for (std::uint32_t s = 0; s < lts.size(); ++s) {
        if (part.block_of[s] != UINT32_MAX) continue;
        auto b = static_cast<std::uint32_t>(part.blocks++);
        for (std::uint32_t r = s; r < lts.size(); ++r)
            if (part.block_of[r] == UINT32_MAX && rel.related(idx[s], idx[r])) part.block_of[r] = b;
    }
    return part;
}

CanonicalLts quotient(const Lts& lts, const Partition& partition) {
    CanonicalLts q;
    q.class_of = partition.block_of;
    q.classes.resize(partition.blocks);
    for (std::uint32_t s = 0; s < lts.size(); ++s) q.classes[partition.block_of[s]].push_back(s);
    q.transitions.resize(partition.blocks);
    for (std::uint32_t b = 0; b < partition.blocks; ++b) {
        std::uint32_t chi = q.classes[b].front();
        q.representative.push_back(chi);
        q.representative_terms.push_back(lts.states[chi]);
        auto& out = q.transitions[b];
        for (auto k = lts.begin(chi); k < lts.end(chi); ++k) out.emplace_back(lts.labels[k], q.class_of[lts.targets[k]]);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
    }
    for (auto r : lts.roots) q.root_classes.push_back(q.class_of[r]);
    return q;
}

namespace {
std::vector<std::uint32_t> bfs_order(const CanonicalLts& canon, std::uint32_t root) {
    std::vector<std::uint32_t> order{root};
    std::vector<std::uint8_t> seen(canon.size(), 0);
    seen[root] = 1;
    for (std::size_t i = 0; i < order.size(); ++i)
        for (auto [l, t] : canon.transitions[order[i]])
            if (!seen[t]) {
                seen[t] = 1;
                order.push_back(t);
            }
    return order;
}
}  // namespace

Term to_recspec(const CanonicalLts& canon, std::uint32_t root_class) {
    auto order = bfs_order(canon, root_class);
    std::vector<std::uint32_t> pos(canon.size(), UINT32_MAX);
    for (std::uint32_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    std::vector<Term> bodies;
    for (auto c : order) {
        std::vector<Term> parts;
        for (auto [l, t] : canon.transitions[c]) parts.push_back(prefix(l, bvar(0, pos[t])));
        bodies.push_back(sum(parts));
    }
    return rec(std::move(bodies), 0);
}

CanonicalLts minimize(const std::vector<Term>& roots, const CheckOptions& opts) {
    Lts lts = explore(roots, opts.max_states);
    if (!lts.complete) throw BudgetExceeded("state space exceeds " + std::to_string(opts.max_states) + " states");
    return quotient(lts, reactive_partition(lts, opts));
}

bool rooted_isomorphic(const CanonicalLts& a, std::uint32_t root_a, const CanonicalLts& b, std::uint32_t root_b) {
    auto oa = bfs_order(a, root_a), ob = bfs_order(b, root_b);
    if (oa.size() != ob.size()) return false;
    auto sig = [](const CanonicalLts& c, std::uint32_t s) {
        std::vector<Label> ls;
        for (auto [l, t] : c.transitions[s]) ls.push_back(l);
        return ls;
    };
    // Backtracking search over bijections, extended along edges from the roots.
    std::vector<std::uint32_t> map_ab(a.size(), UINT32_MAX), map_ba(b.size(), UINT32_MAX);
    auto consistent = [&](std::uint32_t x, std::uint32_t y) { return sig(a, x) == sig(b, y); };
    std::function<bool()> solve = [&]() -> bool {
        for (auto x : oa) {
            if (map_ab[x] == UINT32_MAX) continue;
            std::uint32_t y = map_ab[x];
            const auto& ea = a.transitions[x];
            const auto& eb = b.transitions[y];
            for (std::size_t i = 0; i < ea.size(); ++i) {
                auto [l, tx] = ea[i];
                if (map_ab[tx] != UINT32_MAX) {
                    if (!std::binary_search(eb.begin(), eb.end(), std::make_pair(l, map_ab[tx]))) return false;
                    continue;
                }
                for (auto [m, ty] : eb) {
                    if (m != l || map_ba[ty] != UINT32_MAX || !consistent(tx, ty)) continue;
                    map_ab[tx] = ty;
                    map_ba[ty] = tx;
                    if (solve()) return true;
                    map_ab[tx] = UINT32_MAX;
                    map_ba[ty] = UINT32_MAX;
                }
                return false;
            }
        }
        return true;
    };
    if (!consistent(root_a, root_b)) return false;
    map_ab[root_a] = root_b;
    map_ba[root_b] = root_a;
    return solve();
}

std::string canonical_to_text(const CanonicalLts& canon, const Alphabet& alpha) {
    std::ostringstream os;
    os << "#classes " << canon.size() << "\n";
    for (std::size_t c = 0; c < canon.size(); ++c) {
        os << "c" << c << ": " << print(canon.representative_terms[c], alpha) << "  (" << canon.classes[c].size()
           << " state" << (canon.classes[c].size() == 1 ? "" : "s") << ")\n";
    }
    for (std::size_t c = 0; c < canon.size(); ++c)
        for (auto [l, t] : canon.transitions[c]) os << "c" << c << " -" << alpha.label_name(l) << "-> c" << t << "\n";
    os << "#roots";
    for (auto r : canon.root_classes) os << " c" << r;
    os << "\n";
    return os.str();
}

}  // namespace tocsp
