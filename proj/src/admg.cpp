#include "mcid/admg.hpp"

#include <algorithm>
#include <deque>
#include <iterator>
#include <numeric>
#include <sstream>

namespace mcid {

VertexSet make_set(std::vector<Vertex> items) {
    std::sort(items.begin(), items.end());
    items.erase(std::unique(items.begin(), items.end()), items.end());
    return items;
}

bool contains(const VertexSet& set, Vertex v) { return std::binary_search(set.begin(), set.end(), v); }

bool is_subset(const VertexSet& inner, const VertexSet& outer) {
    return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

bool disjoint(const VertexSet& a, const VertexSet& b) {
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i == *j) return false;
        if (*i < *j) ++i; else ++j;
    }
    return true;
}

VertexSet set_union(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

VertexSet set_intersection(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

VertexMask to_mask(int n, const VertexSet& set) {
    VertexMask mask(static_cast<std::size_t>(n), 0);
    for (Vertex v : set) mask.at(static_cast<std::size_t>(v)) = 1;
    return mask;
}

VertexSet from_mask(const VertexMask& mask) {
    VertexSet out;
    for (std::size_t v = 0; v < mask.size(); ++v)
        if (mask[v]) out.push_back(static_cast<Vertex>(v));
    return out;
}

// ---------------------------------------------------------------------------

Cost saturating_add(Cost a, Cost b) {
    if (a == kInfiniteCost || b == kInfiniteCost) return kInfiniteCost;
    if (a > kInfiniteCost - b) return kInfiniteCost;
    return a + b;
}

CostMap::CostMap(std::vector<Cost> costs) : cost_(std::move(costs)) {
    for (Cost c : cost_)
        if (c < 0) throw InputError("costs must be non-negative");
}

void CostMap::set(Vertex v, Cost c) {
    if (c < 0) throw InputError("costs must be non-negative");
    cost_.at(static_cast<std::size_t>(v)) = c;
}

Cost CostMap::total(const VertexSet& set) const {
    Cost sum = 0;
    for (Vertex v : set) sum = saturating_add(sum, (*this)[v]);
    return sum;
}

Cost CostMap::finite_total() const {
    Cost sum = 0;
    for (Cost c : cost_)
        if (c != kInfiniteCost) sum = saturating_add(sum, c);
    return sum;
}

CostMap CostMap::project(const std::vector<Vertex>& original) const {
    std::vector<Cost> out;
    out.reserve(original.size());
    for (Vertex v : original) out.push_back((*this)[v]);
    return CostMap(std::move(out));
}

// ---------------------------------------------------------------------------

Admg::Admg(std::vector<std::string> labels, std::vector<VertexPair> directed,
           std::vector<VertexPair> bidirected, std::vector<char> latent)
    : labels_(std::move(labels)), latent_(std::move(latent)) {
    const int n = size();
    if (latent_.empty()) latent_.assign(labels_.size(), 0);
    if (latent_.size() != labels_.size()) throw InputError("latent flag table size mismatch");
    for (int v = 0; v < n; ++v) {
        const auto& l = labels_[static_cast<std::size_t>(v)];
        if (l.empty()) throw InputError("empty vertex label");
        if (!index_.emplace(l, v).second) throw InputError("duplicate vertex label '" + l + "'");
    }
    auto check = [n](Vertex a, Vertex b, const char* kind) {
        if (a < 0 || a >= n || b < 0 || b >= n) throw InputError(std::string(kind) + " edge endpoint out of range");
        if (a == b) throw InputError(std::string(kind) + " self-loop");
    };
    for (auto [a, b] : directed) check(a, b, "directed");
    for (auto& e : bidirected) {
        check(e.first, e.second, "bidirected");
        if (e.first > e.second) std::swap(e.first, e.second);
    }
    std::sort(directed.begin(), directed.end());
    if (std::adjacent_find(directed.begin(), directed.end()) != directed.end())
        throw InputError("duplicate directed edge");
    std::sort(bidirected.begin(), bidirected.end());
    if (std::adjacent_find(bidirected.begin(), bidirected.end()) != bidirected.end())
        throw InputError("duplicate bidirected edge");
    directed_ = std::move(directed);
    bidirected_ = std::move(bidirected);

    parents_.assign(static_cast<std::size_t>(n), {});
    children_.assign(static_cast<std::size_t>(n), {});
    siblings_.assign(static_cast<std::size_t>(n), {});
    for (auto [a, b] : directed_) {
        children_[static_cast<std::size_t>(a)].push_back(b);
        parents_[static_cast<std::size_t>(b)].push_back(a);
    }
    for (auto [a, b] : bidirected_) {
        siblings_[static_cast<std::size_t>(a)].push_back(b);
        siblings_[static_cast<std::size_t>(b)].push_back(a);
    }
    for (auto* lists : {&parents_, &children_, &siblings_})
        for (auto& l : *lists) std::sort(l.begin(), l.end());

    if (static_cast<int>(topological_order(*this).size()) != n) throw InputError("directed edges form a cycle");
}

Admg Admg::with_default_labels(int n, std::vector<VertexPair> directed, std::vector<VertexPair> bidirected) {
    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) labels.push_back("v" + std::to_string(v));
    return Admg(std::move(labels), std::move(directed), std::move(bidirected));
}

std::optional<Vertex> Admg::find(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Vertex Admg::at(std::string_view label) const {
    if (auto v = find(label)) return *v;
    throw InputError("unknown vertex '" + std::string(label) + "'");
}

bool Admg::has_directed(Vertex from, Vertex to) const {
    const auto& ch = children_of(from);
    return std::binary_search(ch.begin(), ch.end(), to);
}

bool Admg::has_bidirected(Vertex a, Vertex b) const {
    const auto& sib = siblings_of(a);
    return std::binary_search(sib.begin(), sib.end(), b);
}

VertexSet Admg::all() const {
    VertexSet out(static_cast<std::size_t>(size()));
    std::iota(out.begin(), out.end(), 0);
    return out;
}

void Admg::check_vertex(Vertex v) const {
    if (v < 0 || v >= size()) throw InputError("unknown vertex index " + std::to_string(v));
}

void Admg::check_set(const VertexSet& set) const {
    for (Vertex v : set) check_vertex(v);
    if (!std::is_sorted(set.begin(), set.end()) || std::adjacent_find(set.begin(), set.end()) != set.end())
        throw InputError("vertex set must be sorted and duplicate-free");
}

bool operator==(const Admg& a, const Admg& b) {
    return a.labels_ == b.labels_ && a.latent_ == b.latent_ && a.directed_ == b.directed_ &&
           a.bidirected_ == b.bidirected_;
}

bool UndirectedGraph::adjacent(Vertex a, Vertex b) const {
    const auto& adj = adjacency.at(static_cast<std::size_t>(a));
    return std::binary_search(adj.begin(), adj.end(), b);
}

std::size_t UndirectedGraph::edge_count() const {
    std::size_t twice = 0;
    for (const auto& adj : adjacency) twice += adj.size();
    return twice / 2;
}

// ---------------------------------------------------------------------------

std::vector<Vertex> topological_order(const Admg& g) {
    const int n = g.size();
    std::vector<int> indegree(static_cast<std::size_t>(n), 0);
    for (auto [a, b] : g.directed_edges()) ++indegree[static_cast<std::size_t>(b)];
    std::vector<Vertex> order;
    order.reserve(static_cast<std::size_t>(n));
    for (Vertex v = 0; v < n; ++v)
        if (indegree[static_cast<std::size_t>(v)] == 0) order.push_back(v);
    for (std::size_t head = 0; head < order.size(); ++head)
        for (Vertex c : g.children_of(order[head]))
            if (--indegree[static_cast<std::size_t>(c)] == 0) order.push_back(c);
    return order;
}

VertexSet parents(const Admg& g, const VertexSet& w) {
    g.check_set(w);
    std::vector<Vertex> out;
    for (Vertex v : w)
        for (Vertex p : g.parents_of(v))
            if (!contains(w, p)) out.push_back(p);
    return make_set(std::move(out));
}

VertexSet children(const Admg& g, const VertexSet& w) {
    g.check_set(w);
    std::vector<Vertex> out;
    for (Vertex v : w)
        for (Vertex c : g.children_of(v))
            if (!contains(w, c)) out.push_back(c);
    return make_set(std::move(out));
}

VertexMask ancestor_mask(const Admg& g, const VertexMask& within, const VertexSet& seeds) {
    VertexMask seen(within.size(), 0);
    std::vector<Vertex> stack;
    for (Vertex s : seeds) {
        if (!within[static_cast<std::size_t>(s)] || seen[static_cast<std::size_t>(s)]) continue;
        seen[static_cast<std::size_t>(s)] = 1;
        stack.push_back(s);
    }
    while (!stack.empty()) {
        Vertex v = stack.back();
        stack.pop_back();
        for (Vertex p : g.parents_of(v)) {
            auto pi = static_cast<std::size_t>(p);
            if (within[pi] && !seen[pi]) {
                seen[pi] = 1;
                stack.push_back(p);
            }
        }
    }
    return seen;
}

VertexMask bidirected_component_mask(const Admg& g, const VertexMask& within, const VertexSet& seeds) {
    VertexMask seen(within.size(), 0);
    std::vector<Vertex> stack;
    for (Vertex s : seeds) {
        if (!within[static_cast<std::size_t>(s)] || seen[static_cast<std::size_t>(s)]) continue;
        seen[static_cast<std::size_t>(s)] = 1;
        stack.push_back(s);
    }
    while (!stack.empty()) {
        Vertex v = stack.back();
        stack.pop_back();
        for (Vertex u : g.siblings_of(v)) {
            auto ui = static_cast<std::size_t>(u);
            if (within[ui] && !seen[ui]) {
                seen[ui] = 1;
                stack.push_back(u);
            }
        }
    }
    return seen;
}

VertexSet ancestors_within(const Admg& g, const VertexSet& w, const VertexSet& s) {
    g.check_set(w);
    g.check_set(s);
    if (!is_subset(s, w)) throw InputError("ancestors_within: s must be a subset of w");
    return from_mask(ancestor_mask(g, to_mask(g.size(), w), s));
}

VertexSet ancestors(const Admg& g, const VertexSet& s) { return ancestors_within(g, g.all(), s); }

std::vector<VertexSet> districts_of(const Admg& g, const VertexSet& s) {
    g.check_set(s);
    const VertexMask within = to_mask(g.size(), s);
    VertexMask assigned(within.size(), 0);
    std::vector<VertexSet> out;
    for (Vertex v : s) {
        if (assigned[static_cast<std::size_t>(v)]) continue;
        VertexMask comp = bidirected_component_mask(g, within, {v});
        VertexSet members = from_mask(comp);
        for (Vertex u : members) assigned[static_cast<std::size_t>(u)] = 1;
        out.push_back(std::move(members));
    }
    return out;
}

Admg induced(const Admg& g, const VertexSet& w, std::vector<Vertex>* original) {
    g.check_set(w);
    std::vector<Vertex> remap(static_cast<std::size_t>(g.size()), -1);
    std::vector<std::string> labels;
    std::vector<char> latent;
    for (Vertex v : w) {
        remap[static_cast<std::size_t>(v)] = static_cast<Vertex>(labels.size());
        labels.push_back(g.label(v));
        latent.push_back(g.is_latent(v) ? 1 : 0);
    }
    auto keep = [&](VertexPair e, std::vector<VertexPair>& out) {
        Vertex a = remap[static_cast<std::size_t>(e.first)];
        Vertex b = remap[static_cast<std::size_t>(e.second)];
        if (a >= 0 && b >= 0) out.emplace_back(a, b);
    };
    std::vector<VertexPair> dir, bid;
    for (auto e : g.directed_edges()) keep(e, dir);
    for (auto e : g.bidirected_edges()) keep(e, bid);
    if (original) *original = w;
    return Admg(std::move(labels), std::move(dir), std::move(bid), std::move(latent));
}

Admg remove_incoming(const Admg& g, const VertexSet& i) {
    g.check_set(i);
    const VertexMask in = to_mask(g.size(), i);
    std::vector<VertexPair> dir, bid;
    for (auto e : g.directed_edges())
        if (!in[static_cast<std::size_t>(e.second)]) dir.push_back(e);
    for (auto e : g.bidirected_edges())
        if (!in[static_cast<std::size_t>(e.first)] && !in[static_cast<std::size_t>(e.second)]) bid.push_back(e);
    return Admg(g.labels(), std::move(dir), std::move(bid), g.latent_flags());
}

Admg remove_outgoing(const Admg& g, const VertexSet& a) {
    g.check_set(a);
    const VertexMask in = to_mask(g.size(), a);
    std::vector<VertexPair> dir;
    for (auto e : g.directed_edges())
        if (!in[static_cast<std::size_t>(e.first)]) dir.push_back(e);
    return Admg(g.labels(), std::move(dir), g.bidirected_edges(), g.latent_flags());
}

Admg latent_project(const Admg& g) {
    std::vector<std::string> labels = g.labels();
    std::vector<char> latent = g.latent_flags();
    std::vector<VertexPair> dir = g.directed_edges();
    for (auto [a, b] : g.bidirected_edges()) {
        auto e = static_cast<Vertex>(labels.size());
        labels.push_back(std::string(kLatentPrefix) + g.label(a) + "," + g.label(b));
        latent.push_back(1);
        dir.emplace_back(e, a);
        dir.emplace_back(e, b);
    }
    return Admg(std::move(labels), std::move(dir), {}, std::move(latent));
}

namespace {

UndirectedGraph moralize_dag(const Admg& d) {
    UndirectedGraph m;
    m.labels = d.labels();
    m.latent = d.latent_flags();
    m.adjacency.assign(static_cast<std::size_t>(d.size()), {});
    auto link = [&](Vertex a, Vertex b) {
        m.adjacency[static_cast<std::size_t>(a)].push_back(b);
        m.adjacency[static_cast<std::size_t>(b)].push_back(a);
    };
    for (auto [a, b] : d.directed_edges()) link(a, b);
    for (Vertex v = 0; v < d.size(); ++v) {
        const auto& pa = d.parents_of(v);
        for (std::size_t i = 0; i < pa.size(); ++i)
            for (std::size_t j = i + 1; j < pa.size(); ++j) link(pa[i], pa[j]);
    }
    for (auto& adj : m.adjacency) adj = make_set(std::move(adj));
    return m;
}

}  // namespace

UndirectedGraph moralize(const Admg& g) { return moralize_dag(latent_project(g)); }

bool d_separated(const Admg& g, const VertexSet& a, const VertexSet& b, const VertexSet& z) {
    g.check_set(a);
    g.check_set(b);
    g.check_set(z);
    if (!disjoint(a, b) || !disjoint(a, z) || !disjoint(b, z))
        throw InputError("d_separated: argument sets must be pairwise disjoint");
    for (Vertex v : z)
        if (g.is_latent(v)) throw InputError("latent vertices cannot be conditioned on");
    const Admg d = latent_project(g);
    const VertexSet keep = ancestors(d, set_union(set_union(a, b), z));
    std::vector<Vertex> original;
    const UndirectedGraph m = moralize_dag(induced(d, keep, &original));

    std::vector<Vertex> local(static_cast<std::size_t>(d.size()), -1);
    for (std::size_t k = 0; k < original.size(); ++k) local[static_cast<std::size_t>(original[k])] = static_cast<Vertex>(k);
    VertexMask blocked(original.size(), 0), target(original.size(), 0), seen(original.size(), 0);
    for (Vertex v : z) blocked[static_cast<std::size_t>(local[static_cast<std::size_t>(v)])] = 1;
    for (Vertex v : b) target[static_cast<std::size_t>(local[static_cast<std::size_t>(v)])] = 1;
    std::deque<Vertex> queue;
    for (Vertex v : a) {
        Vertex lv = local[static_cast<std::size_t>(v)];
        seen[static_cast<std::size_t>(lv)] = 1;
        queue.push_back(lv);
    }
    while (!queue.empty()) {
        Vertex v = queue.front();
        queue.pop_front();
        if (target[static_cast<std::size_t>(v)]) return false;
        for (Vertex u : m.adjacency[static_cast<std::size_t>(v)]) {
            auto ui = static_cast<std::size_t>(u);
            if (!seen[ui] && !blocked[ui]) {
                seen[ui] = 1;
                queue.push_back(u);
            }
        }
    }
    return true;
}

}  // namespace mcid
