#pragma once

// Brute-force reference implementations for tests. Everything here is computed from the raw
// edge lists with bitmasks; none of it calls the library's graph algorithms.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <queue>
#include <set>
#include <vector>

#include "mcid/admg.hpp"

namespace oracle {

using mcid::Admg;
using mcid::Cost;
using mcid::CostMap;
using mcid::Vertex;
using mcid::VertexSet;
using Mask = std::uint32_t;

inline Mask bit(Vertex v) { return Mask{1} << v; }

inline Mask to_mask(const VertexSet& s) {
    Mask m = 0;
    for (Vertex v : s) m |= bit(v);
    return m;
}

inline VertexSet from_mask(Mask m) {
    VertexSet out;
    for (Vertex v = 0; v < 32; ++v)
        if (m & bit(v)) out.push_back(v);
    return out;
}

inline int popcount(Mask m) { return __builtin_popcount(m); }

// Ancestors of `targets` (inclusive) in g[within].
inline Mask ancestors(const Admg& g, Mask within, Mask targets) {
    Mask anc = targets & within;
    bool grew = true;
    while (grew) {
        grew = false;
        for (auto [a, b] : g.directed_edges())
            if ((within & bit(a)) && (anc & bit(b)) && !(anc & bit(a))) {
                anc |= bit(a);
                grew = true;
            }
    }
    return anc;
}

// Bidirected component of `seed` in g[within].
inline Mask bidirected_component(const Admg& g, Mask within, Vertex seed) {
    Mask comp = bit(seed);
    bool grew = true;
    while (grew) {
        grew = false;
        for (auto [a, b] : g.bidirected_edges()) {
            if (!(within & bit(a)) || !(within & bit(b))) continue;
            if ((comp & bit(a)) != 0 && (comp & bit(b)) == 0) {
                comp |= bit(b);
                grew = true;
            } else if ((comp & bit(b)) != 0 && (comp & bit(a)) == 0) {
                comp |= bit(a);
                grew = true;
            }
        }
    }
    return comp;
}

inline bool bidirected_connected(const Admg& g, Mask w) {
    if (w == 0) return false;
    return bidirected_component(g, w, static_cast<Vertex>(__builtin_ctz(w))) == w;
}

inline std::vector<Mask> districts(const Admg& g, Mask set) {
    std::vector<Mask> out;
    Mask left = set;
    while (left) {
        const Mask c = bidirected_component(g, set, static_cast<Vertex>(__builtin_ctz(left)));
        out.push_back(c);
        left &= ~c;
    }
    return out;
}

// W ⊋ S, bidirected-connected, every vertex of W an ancestor of S within g[W].
inline bool is_hedge(const Admg& g, Mask s, Mask w) {
    if ((w & s) != s || w == s) return false;
    return bidirected_connected(g, w) && ancestors(g, w, s) == w;
}

inline std::vector<Mask> hedges(const Admg& g, Mask s) {
    const Mask all = bit(g.size()) - 1;
    const VertexSet rest = from_mask(all & ~s);
    std::vector<Mask> out;
    for (Mask sub = 1; sub < (Mask{1} << rest.size()); ++sub) {
        Mask w = s;
        for (std::size_t k = 0; k < rest.size(); ++k)
            if (sub >> k & 1U) w |= bit(rest[k]);
        if (is_hedge(g, s, w)) out.push_back(w);
    }
    return out;
}

inline Mask hull(const Admg& g, Mask s) {
    Mask h = s;
    for (Mask w : hedges(g, s)) h |= w;
    return h;
}

inline bool hits_all(const std::vector<Mask>& hs, Mask i) {
    return std::all_of(hs.begin(), hs.end(), [&](Mask w) { return (w & i) != 0; });
}

inline Cost mask_cost(const CostMap& c, Mask m) {
    Cost total = 0;
    for (Vertex v : from_mask(m)) {
        if (c.is_infinite(v)) return mcid::kInfiniteCost;
        total += c[v];
    }
    return total;
}

// Minimum-cost subset of V \ s hitting every hedge; nullopt if only infinite-cost ones exist.
inline std::optional<Cost> min_hitting_cost(const Admg& g, Mask s, const CostMap& costs) {
    const auto hs = hedges(g, s);
    const VertexSet rest = from_mask((bit(g.size()) - 1) & ~s);
    std::optional<Cost> best;
    for (Mask sub = 0; sub < (Mask{1} << rest.size()); ++sub) {
        Mask i = 0;
        for (std::size_t k = 0; k < rest.size(); ++k)
            if (sub >> k & 1U) i |= bit(rest[k]);
        const Cost c = mask_cost(costs, i);
        if (c == mcid::kInfiniteCost || (best && c >= *best)) continue;
        if (hits_all(hs, i)) best = c;
    }
    return best;
}

// All hedge-hitting subsets of hull(s) \ s.
inline std::set<Mask> hitting_sets_in_hull(const Admg& g, Mask s) {
    const auto hs = hedges(g, s);
    const VertexSet rest = from_mask(hull(g, s) & ~s);
    std::set<Mask> out;
    for (Mask sub = 0; sub < (Mask{1} << rest.size()); ++sub) {
        Mask i = 0;
        for (std::size_t k = 0; k < rest.size(); ++k)
            if (sub >> k & 1U) i |= bit(rest[k]);
        if (hits_all(hs, i)) out.insert(i);
    }
    return out;
}

// Every district of s is served by a member that avoids it and hits all of its hedges.
inline bool identifies(const Admg& g, Mask s, const std::vector<Mask>& family) {
    for (Mask d : districts(g, s)) {
        const auto hs = hedges(g, d);
        const bool served = std::any_of(family.begin(), family.end(),
                                        [&](Mask i) { return (i & d) == 0 && hits_all(hs, i); });
        if (!served) return false;
    }
    return true;
}

// Canonical DAG: observed vertices 0..n-1, one latent parent per bidirected edge.
struct Dag {
    int n = 0;         // total nodes
    int observed = 0;  // first `observed` nodes are the ADMG vertices
    std::vector<std::pair<int, int>> edges;
};

// Drops edges into `no_in` (latent edges included) and directed edges out of `no_out`.
inline Dag canonical_dag(const Admg& g, Mask within, Mask no_in = 0, Mask no_out = 0) {
    Dag d;
    d.observed = g.size();
    d.n = g.size();
    for (auto [a, b] : g.directed_edges()) {
        if (!(within & bit(a)) || !(within & bit(b))) continue;
        if ((no_in & bit(b)) || (no_out & bit(a))) continue;
        d.edges.emplace_back(a, b);
    }
    for (auto [a, b] : g.bidirected_edges()) {
        if (!(within & bit(a)) || !(within & bit(b))) continue;
        const int l = d.n++;
        if (!(no_in & bit(a))) d.edges.emplace_back(l, a);
        if (!(no_in & bit(b))) d.edges.emplace_back(l, b);
    }
    return d;
}

// Moral graph of the DAG restricted to `keep` nodes, then BFS from `from` avoiding `blocked`.
inline bool moral_reachable(const Dag& d, const std::vector<char>& keep, const std::vector<int>& from,
                            const std::vector<int>& to, const std::vector<char>& blocked) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(d.n));
    std::vector<std::vector<int>> parents(static_cast<std::size_t>(d.n));
    for (auto [a, b] : d.edges) {
        if (!keep[static_cast<std::size_t>(a)] || !keep[static_cast<std::size_t>(b)]) continue;
        adj[static_cast<std::size_t>(a)].push_back(b);
        adj[static_cast<std::size_t>(b)].push_back(a);
        parents[static_cast<std::size_t>(b)].push_back(a);
    }
    for (const auto& ps : parents)
        for (std::size_t i = 0; i < ps.size(); ++i)
            for (std::size_t j = i + 1; j < ps.size(); ++j) {
                adj[static_cast<std::size_t>(ps[i])].push_back(ps[j]);
                adj[static_cast<std::size_t>(ps[j])].push_back(ps[i]);
            }
    std::vector<char> target(static_cast<std::size_t>(d.n), 0);
    for (int t : to) target[static_cast<std::size_t>(t)] = 1;
    std::vector<char> seen(static_cast<std::size_t>(d.n), 0);
    std::queue<int> q;
    for (int f : from) {
        seen[static_cast<std::size_t>(f)] = 1;
        q.push(f);
    }
    while (!q.empty()) {
        const int u = q.front();
        q.pop();
        if (target[static_cast<std::size_t>(u)]) return true;
        for (int w : adj[static_cast<std::size_t>(u)]) {
            const auto k = static_cast<std::size_t>(w);
            if (seen[k] || blocked[k] || !keep[k]) continue;
            seen[k] = 1;
            q.push(w);
        }
    }
    return false;
}

// m-separation of a and b given c, via the moral graph of the ancestral set in the canonical DAG.
inline bool m_separated(const Admg& g, Mask a, Mask b, Mask c, Mask no_in = 0) {
    const Mask all = bit(g.size()) - 1;
    const Dag d = canonical_dag(g, all, no_in);
    std::vector<char> keep(static_cast<std::size_t>(d.n), 0);
    for (Vertex v : from_mask(a | b | c)) keep[static_cast<std::size_t>(v)] = 1;
    bool grew = true;
    while (grew) {
        grew = false;
        for (auto [p, ch] : d.edges)
            if (keep[static_cast<std::size_t>(ch)] && !keep[static_cast<std::size_t>(p)]) {
                keep[static_cast<std::size_t>(p)] = 1;
                grew = true;
            }
    }
    std::vector<char> blocked(static_cast<std::size_t>(d.n), 0);
    for (Vertex v : from_mask(c)) blocked[static_cast<std::size_t>(v)] = 1;
    std::vector<int> from;
    std::vector<int> to;
    for (Vertex v : from_mask(a)) from.push_back(v);
    for (Vertex v : from_mask(b)) to.push_back(v);
    return !moral_reachable(d, keep, from, to, blocked);
}

// Drops x ∈ X while x ⫫ Y | X \ {x} in G with edges into X removed, rescanning from the start.
inline Mask make_x_minimal(const Admg& g, Mask x, Mask y) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (Vertex v : from_mask(x)) {
            if (m_separated(g, bit(v), y, x & ~bit(v), x)) {
                x &= ~bit(v);
                changed = true;
                break;
            }
        }
    }
    return x;
}

struct AdjustmentClass {
    Mask x_minimal = 0;
    Mask s = 0;
    Mask parents_s = 0;
    std::optional<Cost> min_cost;  // cheapest I admitting a vertex-cut adjustment set
};

inline Mask parents(const Admg& g, Mask within, Mask s) {
    Mask out = 0;
    for (auto [a, b] : g.directed_edges())
        if ((within & bit(a)) && (s & bit(b)) && !(s & bit(a))) out |= bit(a);
    return out;
}

// True when the observed vertices of Anc(S) \ (S ∪ Pa(S)) separate Pa(S) from S in the moral
// graph of G[relevant] with edges into I and out of Pa(S) removed. Any valid Z is a subset of
// that candidate set and supersets of a cut stay cuts, so this decides existence.
inline bool adjustment_exists(const Admg& g, Mask relevant, Mask s, Mask pa, Mask i, Mask* z_out = nullptr) {
    const Dag d = canonical_dag(g, relevant, i, pa);
    std::vector<char> keep(static_cast<std::size_t>(d.n), 0);
    for (Vertex v : from_mask(relevant)) keep[static_cast<std::size_t>(v)] = 1;
    for (int l = d.observed; l < d.n; ++l) keep[static_cast<std::size_t>(l)] = 1;
    const Mask z = ancestors(g, relevant, s) & ~s & ~pa;
    std::vector<char> blocked(static_cast<std::size_t>(d.n), 0);
    for (Vertex v : from_mask(z)) blocked[static_cast<std::size_t>(v)] = 1;
    std::vector<int> from;
    std::vector<int> to;
    for (Vertex v : from_mask(pa)) from.push_back(v);
    for (Vertex v : from_mask(s)) to.push_back(v);
    if (z_out) *z_out = z;
    return !moral_reachable(d, keep, from, to, blocked);
}

// Exhaustive search over I ⊆ relevant \ S.
inline AdjustmentClass adjustment_class(const Admg& g, Mask x, Mask y, const CostMap& costs) {
    const Mask all = bit(g.size()) - 1;
    AdjustmentClass out;
    out.x_minimal = make_x_minimal(g, x, y);
    const Mask relevant = ancestors(g, all, out.x_minimal | y);
    out.s = ancestors(g, relevant & ~out.x_minimal, y);
    out.parents_s = parents(g, relevant, out.s);
    if (out.parents_s == 0) {
        out.min_cost = 0;
        return out;
    }
    const VertexSet cand = from_mask(relevant & ~out.s);
    for (Mask sub = 0; sub < (Mask{1} << cand.size()); ++sub) {
        Mask i = 0;
        for (std::size_t k = 0; k < cand.size(); ++k)
            if (sub >> k & 1U) i |= bit(cand[k]);
        const Cost c = mask_cost(costs, i);
        if (c == mcid::kInfiniteCost || (out.min_cost && c >= *out.min_cost)) continue;
        if (adjustment_exists(g, relevant, out.s, out.parents_s, i)) out.min_cost = c;
    }
    return out;
}

// Minimum-weight vertex cut by exhaustive search; weights < 0 are uncuttable.
inline std::optional<std::int64_t> min_vertex_cut(int n, const std::vector<std::pair<int, int>>& edges,
                                                  const std::vector<std::int64_t>& weight,
                                                  const std::vector<int>& sources, const std::vector<int>& sinks) {
    std::vector<int> cuttable;
    for (int v = 0; v < n; ++v)
        if (weight[static_cast<std::size_t>(v)] >= 0) cuttable.push_back(v);
    std::optional<std::int64_t> best;
    for (Mask sub = 0; sub < (Mask{1} << cuttable.size()); ++sub) {
        std::vector<char> removed(static_cast<std::size_t>(n), 0);
        std::int64_t w = 0;
        for (std::size_t k = 0; k < cuttable.size(); ++k)
            if (sub >> k & 1U) {
                removed[static_cast<std::size_t>(cuttable[k])] = 1;
                w += weight[static_cast<std::size_t>(cuttable[k])];
            }
        if (best && w >= *best) continue;
        std::vector<char> seen(static_cast<std::size_t>(n), 0);
        std::queue<int> q;
        for (int s : sources)
            if (!removed[static_cast<std::size_t>(s)]) {
                seen[static_cast<std::size_t>(s)] = 1;
                q.push(s);
            }
        bool reached = false;
        while (!q.empty() && !reached) {
            const int u = q.front();
            q.pop();
            if (std::find(sinks.begin(), sinks.end(), u) != sinks.end()) reached = true;
            for (auto [a, b] : edges) {
                const int other = a == u ? b : (b == u ? a : -1);
                if (other < 0) continue;
                const auto k = static_cast<std::size_t>(other);
                if (seen[k] || removed[k]) continue;
                seen[k] = 1;
                q.push(other);
            }
        }
        if (!reached) best = w;
    }
    return best;
}

}  // namespace oracle
