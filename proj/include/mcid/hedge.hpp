#pragma once

#include <optional>
#include <vector>

#include "mcid/admg.hpp"

namespace mcid {

/// A query P_x(y) reduced to its relevant part: the graph is restricted to Anc(x ∪ y) and
/// all vertex sets below are indices into that restricted graph.
struct PreparedQuery {
    Admg g;
    std::vector<Vertex> original;  // index in the caller's graph for every vertex of g
    VertexSet x;
    VertexSet y;
    VertexSet s;                       // Anc_{V\x}(y)
    std::vector<VertexSet> districts;  // maximal districts of g[s], ordered by smallest member

    [[nodiscard]] CostMap project(const CostMap& costs) const { return costs.project(original); }
    [[nodiscard]] VertexSet to_original(const VertexSet& set) const;
    [[nodiscard]] VertexSet from_original(const VertexSet& set) const;
};

/// A family of intervention sets. `serves[l]` is the index of the member used for district l,
/// or -1 when unknown.
struct InterventionFamily {
    std::vector<VertexSet> sets;
    Cost total_cost = 0;
    std::vector<int> serves;

    static InterventionFamily of(std::vector<VertexSet> sets, const CostMap& costs);
};

/// Σ over members of Σ over their vertices (a vertex in two members is paid twice).
Cost family_cost(const std::vector<VertexSet>& sets, const CostMap& costs);

PreparedQuery prepare(const Admg& g, const VertexSet& x, const VertexSet& y);

/// Non-empty and bidirected-connected in g[s].
bool is_district(const Admg& g, const VertexSet& s);

/// Union of all hedges formed for the district s, computed by alternating ancestral and
/// bidirected-component pruning until a fixpoint. Equals s iff s has no hedge.
VertexSet hedge_hull(const Admg& g, const VertexSet& s);
/// Hull of s in g[V \ removed].
VertexSet hedge_hull_without(const Admg& g, const VertexSet& s, const VertexSet& removed);
/// Mask variant used in hot loops; `within` must contain s.
VertexMask hedge_hull_mask(const Admg& g, const VertexSet& s, VertexMask within);

bool is_hedge(const Admg& g, const VertexSet& s, const VertexSet& w);

/// True iff no hedge for s survives in g[V \ i]. Requires i ∩ s = ∅.
bool hits_all_hedges(const Admg& g, const VertexSet& s, const VertexSet& i);

inline constexpr std::size_t kHedgeEnumerationGuard = 25;

/// All hedges for s, ordered by size then lexicographically. Without a limit the hull may
/// have at most kHedgeEnumerationGuard vertices outside s; with a limit, finding more than
/// `limit` hedges raises ResourceError.
std::vector<VertexSet> enumerate_hedges(const Admg& g, const VertexSet& s,
                                        std::optional<std::size_t> limit = std::nullopt);

/// An inclusion-minimal hedge for s avoiding `forbidden`, or nullopt if none exists.
/// Vertices are pruned in descending cost order so cheap vertices tend to survive.
std::optional<VertexSet> find_minimal_hedge(const Admg& g, const VertexSet& s, const VertexSet& forbidden,
                                            const CostMap& costs);
std::optional<VertexSet> find_minimal_hedge(const Admg& g, const VertexSet& s, const VertexSet& forbidden);

/// Every district is served by some member that avoids it and hits all of its hedges.
bool is_identifiable(const PreparedQuery& pq, const InterventionFamily& family);

}  // namespace mcid
