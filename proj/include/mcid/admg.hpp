#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mcid/errors.hpp"

namespace mcid {

using Vertex = int;

/// Sorted, duplicate-free list of vertex indices.
using VertexSet = std::vector<Vertex>;

/// Dense membership table indexed by vertex.
using VertexMask = std::vector<char>;

VertexSet make_set(std::vector<Vertex> items);
bool contains(const VertexSet& set, Vertex v);
bool is_subset(const VertexSet& inner, const VertexSet& outer);
bool disjoint(const VertexSet& a, const VertexSet& b);
VertexSet set_union(const VertexSet& a, const VertexSet& b);
VertexSet set_intersection(const VertexSet& a, const VertexSet& b);
VertexSet set_difference(const VertexSet& a, const VertexSet& b);
VertexMask to_mask(int n, const VertexSet& set);
VertexSet from_mask(const VertexMask& mask);

using Cost = std::int64_t;
inline constexpr Cost kInfiniteCost = std::numeric_limits<Cost>::max();

/// Per-vertex intervention cost. kInfiniteCost marks a vertex that cannot be intervened on.
class CostMap {
public:
    CostMap() = default;
    explicit CostMap(std::size_t n, Cost fill = 1) : cost_(n, fill) {}
    explicit CostMap(std::vector<Cost> costs);

    [[nodiscard]] std::size_t size() const { return cost_.size(); }
    [[nodiscard]] Cost operator[](Vertex v) const { return cost_.at(static_cast<std::size_t>(v)); }
    [[nodiscard]] bool is_infinite(Vertex v) const { return (*this)[v] == kInfiniteCost; }
    void set(Vertex v, Cost c);

    /// Sum over the set; saturates at kInfiniteCost.
    [[nodiscard]] Cost total(const VertexSet& set) const;
    /// Sum of all finite entries.
    [[nodiscard]] Cost finite_total() const;

    /// Costs re-indexed for a derived graph whose vertex k is vertex original[k] here.
    [[nodiscard]] CostMap project(const std::vector<Vertex>& original) const;

    [[nodiscard]] const std::vector<Cost>& values() const { return cost_; }

private:
    std::vector<Cost> cost_;
};

Cost saturating_add(Cost a, Cost b);

using VertexPair = std::pair<Vertex, Vertex>;

/// Acyclic directed mixed graph. Immutable once constructed; every transform returns a new value.
class Admg {
public:
    Admg() = default;

    /// Validates labels (unique, non-empty), edge endpoints, self-loops, duplicates and
    /// acyclicity of the directed part. Bidirected pairs are canonicalised low-first.
    Admg(std::vector<std::string> labels, std::vector<VertexPair> directed,
         std::vector<VertexPair> bidirected, std::vector<char> latent = {});

    /// Graph with labels "v0".."v{n-1}".
    static Admg with_default_labels(int n, std::vector<VertexPair> directed,
                                    std::vector<VertexPair> bidirected);

    [[nodiscard]] int size() const { return static_cast<int>(labels_.size()); }
    [[nodiscard]] const std::string& label(Vertex v) const { return labels_.at(static_cast<std::size_t>(v)); }
    [[nodiscard]] const std::vector<std::string>& labels() const { return labels_; }
    [[nodiscard]] std::optional<Vertex> find(std::string_view label) const;
    /// Throws InputError for unknown labels.
    [[nodiscard]] Vertex at(std::string_view label) const;
    [[nodiscard]] bool is_latent(Vertex v) const { return latent_.at(static_cast<std::size_t>(v)) != 0; }
    [[nodiscard]] const std::vector<char>& latent_flags() const { return latent_; }

    [[nodiscard]] const std::vector<VertexPair>& directed_edges() const { return directed_; }
    [[nodiscard]] const std::vector<VertexPair>& bidirected_edges() const { return bidirected_; }
    [[nodiscard]] const std::vector<Vertex>& parents_of(Vertex v) const { return parents_.at(static_cast<std::size_t>(v)); }
    [[nodiscard]] const std::vector<Vertex>& children_of(Vertex v) const { return children_.at(static_cast<std::size_t>(v)); }
    [[nodiscard]] const std::vector<Vertex>& siblings_of(Vertex v) const { return siblings_.at(static_cast<std::size_t>(v)); }
    [[nodiscard]] bool has_directed(Vertex from, Vertex to) const;
    [[nodiscard]] bool has_bidirected(Vertex a, Vertex b) const;

    [[nodiscard]] VertexSet all() const;
    void check_vertex(Vertex v) const;
    void check_set(const VertexSet& set) const;

    friend bool operator==(const Admg& a, const Admg& b);

private:
    std::vector<std::string> labels_;
    std::vector<char> latent_;
    std::vector<VertexPair> directed_;
    std::vector<VertexPair> bidirected_;
    std::vector<std::vector<Vertex>> parents_;
    std::vector<std::vector<Vertex>> children_;
    std::vector<std::vector<Vertex>> siblings_;
    std::unordered_map<std::string, Vertex> index_;
};

/// Reserved label prefix for latent vertices created by latent_project.
inline constexpr std::string_view kLatentPrefix = "u:";

/// Undirected simple graph (moral graphs).
struct UndirectedGraph {
    std::vector<std::string> labels;
    std::vector<char> latent;
    std::vector<std::vector<Vertex>> adjacency;  // sorted

    [[nodiscard]] int size() const { return static_cast<int>(adjacency.size()); }
    [[nodiscard]] bool adjacent(Vertex a, Vertex b) const;
    [[nodiscard]] std::size_t edge_count() const;
};

// Pa(W) \ W.
VertexSet parents(const Admg& g, const VertexSet& w);
// Ch(W) \ W.
VertexSet children(const Admg& g, const VertexSet& w);

/// Anc_W(S): vertices of w with a directed path into s inside g[w]; always contains s.
VertexSet ancestors_within(const Admg& g, const VertexSet& w, const VertexSet& s);
VertexSet ancestors(const Admg& g, const VertexSet& s);

/// Maximal bidirected-connected components of g[s], ordered by smallest member.
std::vector<VertexSet> districts_of(const Admg& g, const VertexSet& s);

/// Mask-level kernels shared by the hull computations. `within` restricts the search.
VertexMask ancestor_mask(const Admg& g, const VertexMask& within, const VertexSet& seeds);
VertexMask bidirected_component_mask(const Admg& g, const VertexMask& within, const VertexSet& seeds);

/// Induced subgraph g[w]. Vertices are renumbered in ascending order of their index in g;
/// `original`, when given, receives the g-index of every new vertex.
Admg induced(const Admg& g, const VertexSet& w, std::vector<Vertex>* original = nullptr);

/// Drops directed edges into i and bidirected edges touching i.
Admg remove_incoming(const Admg& g, const VertexSet& i);
/// Drops directed edges leaving a.
Admg remove_outgoing(const Admg& g, const VertexSet& a);

/// G^d: each bidirected edge {x,y} becomes a latent vertex "u:x,y" with edges to x and y.
/// Original vertices keep their indices; latent vertices follow in bidirected-edge order.
Admg latent_project(const Admg& g);

/// Moral graph of latent_project(g).
UndirectedGraph moralize(const Admg& g);

/// True iff z separates a from b in the moral graph of the ancestral closure of a∪b∪z in G^d.
bool d_separated(const Admg& g, const VertexSet& a, const VertexSet& b, const VertexSet& z);

/// Vertices of g ordered so that every directed edge points forward.
std::vector<Vertex> topological_order(const Admg& g);

}  // namespace mcid
