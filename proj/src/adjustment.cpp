#include "mcid/adjustment.hpp"

#include <algorithm>
#include <queue>

#include "mcid/maxflow.hpp"

namespace mcid {

VertexSet make_x_minimal(const Admg& g, const VertexSet& x, const VertexSet& y) {
    g.check_set(x);
    g.check_set(y);
    if (!disjoint(x, y)) throw InputError("make_x_minimal: x and y must be disjoint");
    if (y.empty()) throw InputError("make_x_minimal: y must be non-empty");
    VertexSet current = x;
    bool changed = true;
    while (changed) {
        changed = false;
        const Admg cut = remove_incoming(g, current);
        for (Vertex v : current) {
            const VertexSet rest = set_difference(current, {v});
            if (d_separated(cut, {v}, y, rest)) {
                current = rest;
                changed = true;
                break;
            }
        }
    }
    return current;
}

namespace {

std::int64_t cut_weight(Cost c) { return c == kInfiniteCost ? kUncuttable : c; }

// Indices in a subgraph whose vertex k is original[k]; vertices outside it are dropped.
VertexSet to_local(const VertexSet& set, const std::vector<Vertex>& original) {
    VertexSet out;
    for (Vertex a : set) {
        auto it = std::lower_bound(original.begin(), original.end(), a);
        if (it != original.end() && *it == a) out.push_back(static_cast<Vertex>(it - original.begin()));
    }
    return out;
}

VertexSet map_back(const VertexSet& set, const std::vector<Vertex>& original) {
    VertexSet out;
    for (Vertex v : set) out.push_back(original.at(static_cast<std::size_t>(v)));
    return make_set(std::move(out));
}

}  // namespace

AdjustmentResult gen_adjustment(const Admg& g, const VertexSet& x, const VertexSet& y, const CostMap& costs) {
    g.check_set(x);
    g.check_set(y);
    if (costs.size() != static_cast<std::size_t>(g.size())) throw InputError("cost table size does not match graph");
    if (!disjoint(x, y)) throw InputError("gen_adjustment: x and y must be disjoint");
    if (y.empty()) throw InputError("gen_adjustment: y must be non-empty");

    // Vertices outside Anc(X ∪ Y) are irrelevant; prune before and after minimising X.
    std::vector<Vertex> original;
    Admg h = induced(g, ancestors(g, set_union(x, y)), &original);
    const VertexSet x_min = map_back(make_x_minimal(h, to_local(x, original), to_local(y, original)), original);

    std::vector<Vertex> orig2;
    h = induced(g, ancestors(g, set_union(x_min, y)), &orig2);
    const VertexSet lx = to_local(x_min, orig2);
    const VertexSet ly = to_local(y, orig2);
    const CostMap lc = costs.project(orig2);

    AdjustmentResult result;
    result.x_minimal = x_min;
    const VertexSet s = ancestors_within(h, set_difference(h.all(), lx), ly);
    const VertexSet pa = parents(h, s);
    result.s = map_back(s, orig2);
    result.parents_s = map_back(pa, orig2);
    if (pa.empty()) return result;

    const VertexMask anc_s = to_mask(h.size(), ancestors(h, s));
    const VertexMask in_s = to_mask(h.size(), s);
    const VertexMask in_pa = to_mask(h.size(), pa);
    const Admg d = latent_project(remove_outgoing(h, pa));

    // Network vertex 2v is v1 (adjust on v), 2v+1 is v2 (intervene on v).
    const int n = d.size();
    std::vector<std::int64_t> weight(static_cast<std::size_t>(2 * n), kUncuttable);
    std::vector<std::pair<int, int>> edges;
    for (Vertex v = 0; v < n; ++v) {
        edges.emplace_back(2 * v, 2 * v + 1);
        if (v >= h.size() || d.is_latent(v)) continue;
        const auto i = static_cast<std::size_t>(v);
        if (anc_s[i] && !in_s[i] && !in_pa[i]) weight[2 * i] = 0;
        if (!in_s[i]) weight[2 * i + 1] = cut_weight(lc[v]);
    }
    for (auto [w, v] : d.directed_edges()) edges.emplace_back(2 * w, 2 * v + 1);
    std::vector<int> sources;
    std::vector<int> sinks;
    for (Vertex v : pa) sources.push_back(2 * v);
    for (Vertex v : s) sinks.push_back(2 * v);

    const VertexCutResult cut = min_vertex_cut(2 * n, edges, weight, sources, sinks);
    if (!cut.feasible) throw InfeasibleError("no finite-cost intervention admits an adjustment set");
    VertexSet inter;
    VertexSet adj;
    for (int node : cut.cut) (node % 2 ? inter : adj).push_back(node / 2);
    result.intervention = map_back(make_set(inter), orig2);
    result.adjustment = map_back(make_set(adj), orig2);
    result.cost = costs.total(result.intervention);
    return result;
}

bool verify_adjustment(const Admg& g, const VertexSet& x, const VertexSet& y, const VertexSet& i,
                       const VertexSet& z) {
    g.check_set(x);
    g.check_set(y);
    g.check_set(i);
    g.check_set(z);
    const VertexSet relevant = ancestors(g, set_union(x, y));
    if (!is_subset(z, relevant)) return false;
    const VertexSet s = ancestors_within(g, set_difference(relevant, x), y);
    const VertexSet pa = parents(g, s);
    if (!disjoint(i, s)) return false;
    if (!disjoint(z, s) || !disjoint(z, pa)) return false;
    if (!is_subset(z, ancestors(g, s))) return false;
    for (Vertex v : z)
        if (g.is_latent(v)) return false;

    std::vector<Vertex> original;
    const Admg h = induced(g, relevant, &original);
    const VertexSet ls = to_local(s, original);
    const VertexSet lpa = to_local(pa, original);
    const UndirectedGraph moral = moralize(remove_outgoing(remove_incoming(h, to_local(i, original)), lpa));

    VertexMask blocked = to_mask(moral.size(), {});
    for (Vertex v : to_local(z, original)) blocked[static_cast<std::size_t>(v)] = 1;
    const VertexMask target = to_mask(moral.size(), ls);
    VertexMask seen(static_cast<std::size_t>(moral.size()), 0);
    std::queue<Vertex> q;
    for (Vertex v : lpa) {
        seen[static_cast<std::size_t>(v)] = 1;
        q.push(v);
    }
    while (!q.empty()) {
        const Vertex u = q.front();
        q.pop();
        if (target[static_cast<std::size_t>(u)]) return false;
        for (Vertex w : moral.adjacency[static_cast<std::size_t>(u)]) {
            const auto k = static_cast<std::size_t>(w);
            if (seen[k] || blocked[k]) continue;
            seen[k] = 1;
            q.push(w);
        }
    }
    return true;
}

VertexSet h1_baseline(const Admg& g, const VertexSet& s, const CostMap& costs) {
    if (costs.size() != static_cast<std::size_t>(g.size())) throw InputError("cost table size does not match graph");
    const VertexSet hull = hedge_hull(g, s);
    std::vector<Vertex> original;
    const Admg h = induced(g, hull, &original);
    const VertexSet ls = to_local(s, original);
    const VertexSet pa = parents(h, ls);
    if (pa.empty()) return {};

    // Intervening on v removes its bidirected edges, so v is a cut vertex of weight C(v).
    const VertexMask in_s = to_mask(h.size(), ls);
    std::vector<std::int64_t> weight(static_cast<std::size_t>(h.size()));
    for (Vertex v = 0; v < h.size(); ++v)
        weight[static_cast<std::size_t>(v)] = in_s[static_cast<std::size_t>(v)] ? kUncuttable : cut_weight(costs[original[static_cast<std::size_t>(v)]]);
    std::vector<std::pair<int, int>> edges(h.bidirected_edges().begin(), h.bidirected_edges().end());

    // Parents of S may themselves be cut, so they are linked to a fresh uncuttable source.
    const int root = h.size();
    weight.push_back(kUncuttable);
    for (Vertex p : pa) edges.emplace_back(root, p);
    const VertexCutResult cut = min_vertex_cut(h.size() + 1, edges, weight, {root}, ls);
    if (!cut.feasible) throw InfeasibleError("no finite-cost bidirected cut between Pa(S) and S");
    VertexSet out;
    for (int v : cut.cut) out.push_back(original[static_cast<std::size_t>(v)]);
    out = make_set(std::move(out));
    if (!hits_all_hedges(g, s, out)) throw VerificationError("H1 cut leaves a hedge intact");
    return out;
}

InterventionFamily heuristic_mcid(const PreparedQuery& pq, const CostMap& costs) {
    if (costs.size() != static_cast<std::size_t>(pq.g.size())) throw InputError("cost table size does not match graph");
    std::vector<VertexSet> sets;
    for (const auto& district : pq.districts) {
        const VertexSet hull = hedge_hull(pq.g, district);
        if (hull.size() == district.size()) {
            sets.emplace_back();
            continue;
        }
        std::vector<Vertex> original;
        const Admg h = induced(pq.g, hull, &original);
        const VertexSet ls = to_local(district, original);
        const VertexSet lx = parents(h, ls);
        const AdjustmentResult r = gen_adjustment(h, lx, ls, costs.project(original));
        sets.push_back(map_back(r.intervention, original));
    }
    InterventionFamily family = InterventionFamily::of(std::move(sets), costs);
    family.serves.resize(pq.districts.size());
    for (std::size_t l = 0; l < family.serves.size(); ++l) family.serves[l] = static_cast<int>(l);
    if (!is_identifiable(pq, family)) throw VerificationError("adjustment heuristic returned a non-identifying family");
    return family;
}

}  // namespace mcid
