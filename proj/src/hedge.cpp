#include "mcid/hedge.hpp"

#include <algorithm>
#include <numeric>

namespace mcid {

VertexSet PreparedQuery::to_original(const VertexSet& set) const {
    std::vector<Vertex> out;
    out.reserve(set.size());
    for (Vertex v : set) out.push_back(original.at(static_cast<std::size_t>(v)));
    return make_set(std::move(out));
}

VertexSet PreparedQuery::from_original(const VertexSet& set) const {
    std::vector<Vertex> out;
    for (Vertex v : set) {
        auto it = std::lower_bound(original.begin(), original.end(), v);
        if (it == original.end() || *it != v) continue;  // irrelevant to the query
        out.push_back(static_cast<Vertex>(it - original.begin()));
    }
    return make_set(std::move(out));
}

Cost family_cost(const std::vector<VertexSet>& sets, const CostMap& costs) {
    Cost sum = 0;
    for (const auto& set : sets) sum = saturating_add(sum, costs.total(set));
    return sum;
}

InterventionFamily InterventionFamily::of(std::vector<VertexSet> sets, const CostMap& costs) {
    InterventionFamily f;
    f.total_cost = family_cost(sets, costs);
    f.sets = std::move(sets);
    return f;
}

PreparedQuery prepare(const Admg& g, const VertexSet& x, const VertexSet& y) {
    g.check_set(x);
    g.check_set(y);
    if (x.empty() || y.empty()) throw InputError("query sets X and Y must be non-empty");
    if (!disjoint(x, y)) throw InputError("query sets X and Y must be disjoint");

    PreparedQuery pq;
    const VertexSet relevant = ancestors(g, set_union(x, y));
    pq.g = induced(g, relevant, &pq.original);
    pq.x = pq.from_original(x);
    pq.y = pq.from_original(y);
    pq.s = ancestors_within(pq.g, set_difference(pq.g.all(), pq.x), pq.y);
    pq.districts = districts_of(pq.g, pq.s);
    return pq;
}

bool is_district(const Admg& g, const VertexSet& s) {
    if (s.empty()) return false;
    g.check_set(s);
    VertexMask comp = bidirected_component_mask(g, to_mask(g.size(), s), {s.front()});
    return std::all_of(s.begin(), s.end(), [&](Vertex v) { return comp[static_cast<std::size_t>(v)] != 0; });
}

VertexMask hedge_hull_mask(const Admg& g, const VertexSet& s, VertexMask within) {
    VertexMask h = ancestor_mask(g, within, s);
    std::size_t size = static_cast<std::size_t>(std::count(h.begin(), h.end(), 1));
    while (true) {
        VertexMask h2 = bidirected_component_mask(g, h, s);
        auto size2 = static_cast<std::size_t>(std::count(h2.begin(), h2.end(), 1));
        if (size2 == size) return h;
        h = ancestor_mask(g, h2, s);
        size = static_cast<std::size_t>(std::count(h.begin(), h.end(), 1));
        if (size == size2) return h;
    }
}

namespace {

void require_district(const Admg& g, const VertexSet& s) {
    g.check_set(s);
    if (!is_district(g, s)) throw InputError("vertex set is not a district");
}

}  // namespace

VertexSet hedge_hull(const Admg& g, const VertexSet& s) {
    require_district(g, s);
    return from_mask(hedge_hull_mask(g, s, VertexMask(static_cast<std::size_t>(g.size()), 1)));
}

VertexSet hedge_hull_without(const Admg& g, const VertexSet& s, const VertexSet& removed) {
    require_district(g, s);
    g.check_set(removed);
    if (!disjoint(s, removed)) throw InputError("removed vertices intersect the district");
    VertexMask within(static_cast<std::size_t>(g.size()), 1);
    for (Vertex v : removed) within[static_cast<std::size_t>(v)] = 0;
    return from_mask(hedge_hull_mask(g, s, std::move(within)));
}

bool is_hedge(const Admg& g, const VertexSet& s, const VertexSet& w) {
    require_district(g, s);
    g.check_set(w);
    if (!is_subset(s, w)) throw InputError("is_hedge: w must contain s");
    if (w.size() == s.size()) throw InputError("is_hedge: a hedge must properly contain s");
    const VertexMask within = to_mask(g.size(), w);
    if (from_mask(bidirected_component_mask(g, within, s)) != w) return false;
    return from_mask(ancestor_mask(g, within, s)) == w;
}

bool hits_all_hedges(const Admg& g, const VertexSet& s, const VertexSet& i) {
    if (!disjoint(s, i)) throw InputError("intervention set intersects the district");
    return hedge_hull_without(g, s, i).size() == s.size();
}

namespace {

// Depth-first search over keep/drop decisions for the hull vertices outside s. Dropping a
// vertex shrinks the hull of the remaining graph; any vertex already kept must stay in it.
struct HedgeSearch {
    const Admg& g;
    const VertexSet& s;
    std::vector<Vertex> candidates;
    std::optional<std::size_t> limit;
    std::vector<VertexSet> found;

    void run(std::size_t pos, VertexMask within, VertexMask kept) {
        VertexMask hull = hedge_hull_mask(g, s, within);
        for (std::size_t v = 0; v < kept.size(); ++v)
            if (kept[v] && !hull[v]) return;
        // Skip decisions for vertices that already fell out of the hull.
        while (pos < candidates.size() && !hull[static_cast<std::size_t>(candidates[pos])]) ++pos;
        if (pos == candidates.size()) {
            VertexSet w = from_mask(kept);
            w = set_union(w, s);
            if (w.size() > s.size() && is_hedge(g, s, w)) {
                found.push_back(std::move(w));
                if (limit && found.size() > *limit)
                    throw ResourceError("more than " + std::to_string(*limit) + " hedges");
            }
            return;
        }
        const auto v = static_cast<std::size_t>(candidates[pos]);
        kept[v] = 1;
        run(pos + 1, within, kept);
        kept[v] = 0;
        within[v] = 0;
        run(pos + 1, std::move(within), std::move(kept));
    }
};

}  // namespace

std::vector<VertexSet> enumerate_hedges(const Admg& g, const VertexSet& s, std::optional<std::size_t> limit) {
    const VertexSet hull = hedge_hull(g, s);
    const VertexSet outside = set_difference(hull, s);
    if (!limit && outside.size() > kHedgeEnumerationGuard)
        throw ResourceError("hedge hull too large to enumerate (" + std::to_string(outside.size()) + " vertices)");
    if (outside.empty()) return {};

    HedgeSearch search{g, s, outside, limit, {}};
    search.run(0, to_mask(g.size(), hull), VertexMask(static_cast<std::size_t>(g.size()), 0));
    std::sort(search.found.begin(), search.found.end(), [](const VertexSet& a, const VertexSet& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    return search.found;
}

std::optional<VertexSet> find_minimal_hedge(const Admg& g, const VertexSet& s, const VertexSet& forbidden,
                                            const CostMap& costs) {
    require_district(g, s);
    g.check_set(forbidden);
    if (!disjoint(s, forbidden)) throw InputError("forbidden vertices intersect the district");
    VertexMask within(static_cast<std::size_t>(g.size()), 1);
    for (Vertex v : forbidden) within[static_cast<std::size_t>(v)] = 0;
    VertexMask hull = hedge_hull_mask(g, s, within);
    VertexSet outside = set_difference(from_mask(hull), s);
    if (outside.empty()) return std::nullopt;

    std::stable_sort(outside.begin(), outside.end(), [&](Vertex a, Vertex b) { return costs[a] > costs[b]; });
    for (Vertex v : outside) {
        if (!hull[static_cast<std::size_t>(v)]) continue;
        VertexMask trial = hull;
        trial[static_cast<std::size_t>(v)] = 0;
        VertexMask smaller = hedge_hull_mask(g, s, std::move(trial));
        if (static_cast<std::size_t>(std::count(smaller.begin(), smaller.end(), 1)) > s.size()) hull = std::move(smaller);
    }
    return from_mask(hull);
}

std::optional<VertexSet> find_minimal_hedge(const Admg& g, const VertexSet& s, const VertexSet& forbidden) {
    return find_minimal_hedge(g, s, forbidden, CostMap(static_cast<std::size_t>(g.size()), 1));
}

bool is_identifiable(const PreparedQuery& pq, const InterventionFamily& family) {
    for (const auto& set : family.sets) pq.g.check_set(set);
    for (const auto& district : pq.districts) {
        bool served = std::any_of(family.sets.begin(), family.sets.end(), [&](const VertexSet& member) {
            return disjoint(member, district) && hits_all_hedges(pq.g, district, member);
        });
        if (!served) return false;
    }
    return true;
}

}  // namespace mcid
