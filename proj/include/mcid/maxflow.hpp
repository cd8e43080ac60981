#pragma once

#include <cstdint>
#include <vector>

namespace mcid {

/// Dinic's algorithm on integer capacities.
class MaxFlow {
public:
    using Capacity = std::int64_t;

    explicit MaxFlow(int nodes);

    int add_node();
    void add_edge(int from, int to, Capacity capacity);
    Capacity run(int source, int sink);

    /// Nodes reachable from the source in the residual network after run().
    [[nodiscard]] std::vector<char> source_side(int source) const;
    [[nodiscard]] int size() const { return static_cast<int>(adjacency_.size()); }

private:
    struct Arc {
        int to;
        Capacity residual;
    };

    bool build_levels(int source, int sink);
    Capacity augment(int node, int sink, Capacity limit);

    std::vector<Arc> arcs_;
    std::vector<std::vector<int>> adjacency_;
    std::vector<int> level_;
    std::vector<std::size_t> cursor_;
};

/// Minimum-weight vertex cut between two terminal sets in an undirected graph. Each vertex
/// has a weight; `kUncuttable` marks vertices that may not be cut (terminals are always
/// uncuttable).
struct VertexCutResult {
    bool feasible = false;
    std::int64_t weight = 0;
    std::vector<int> cut;  // ascending
};

inline constexpr std::int64_t kUncuttable = -1;

VertexCutResult min_vertex_cut(int n, const std::vector<std::pair<int, int>>& edges,
                               const std::vector<std::int64_t>& weight, const std::vector<int>& sources,
                               const std::vector<int>& sinks);

}  // namespace mcid
