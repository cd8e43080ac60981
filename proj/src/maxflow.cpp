#include "mcid/maxflow.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>

#include "mcid/errors.hpp"

namespace mcid {

MaxFlow::MaxFlow(int nodes) : adjacency_(static_cast<std::size_t>(nodes)) {}

int MaxFlow::add_node() {
    adjacency_.emplace_back();
    return size() - 1;
}

void MaxFlow::add_edge(int from, int to, Capacity capacity) {
    if (from < 0 || to < 0 || from >= size() || to >= size()) throw InputError("max-flow edge endpoint out of range");
    if (capacity < 0) throw InputError("negative capacity");
    adjacency_[static_cast<std::size_t>(from)].push_back(static_cast<int>(arcs_.size()));
    arcs_.push_back({to, capacity});
    adjacency_[static_cast<std::size_t>(to)].push_back(static_cast<int>(arcs_.size()));
    arcs_.push_back({from, 0});
}

bool MaxFlow::build_levels(int source, int sink) {
    level_.assign(adjacency_.size(), -1);
    std::queue<int> q;
    level_[static_cast<std::size_t>(source)] = 0;
    q.push(source);
    while (!q.empty()) {
        const int u = q.front();
        q.pop();
        for (int a : adjacency_[static_cast<std::size_t>(u)]) {
            const Arc& arc = arcs_[static_cast<std::size_t>(a)];
            if (arc.residual > 0 && level_[static_cast<std::size_t>(arc.to)] < 0) {
                level_[static_cast<std::size_t>(arc.to)] = level_[static_cast<std::size_t>(u)] + 1;
                q.push(arc.to);
            }
        }
    }
    return level_[static_cast<std::size_t>(sink)] >= 0;
}

MaxFlow::Capacity MaxFlow::augment(int node, int sink, Capacity limit) {
    if (node == sink) return limit;
    auto& cur = cursor_[static_cast<std::size_t>(node)];
    const auto& adj = adjacency_[static_cast<std::size_t>(node)];
    for (; cur < adj.size(); ++cur) {
        const int a = adj[cur];
        Arc& arc = arcs_[static_cast<std::size_t>(a)];
        if (arc.residual <= 0 || level_[static_cast<std::size_t>(arc.to)] != level_[static_cast<std::size_t>(node)] + 1)
            continue;
        const Capacity pushed = augment(arc.to, sink, std::min(limit, arc.residual));
        if (pushed > 0) {
            arc.residual -= pushed;
            arcs_[static_cast<std::size_t>(a ^ 1)].residual += pushed;
            return pushed;
        }
    }
    return 0;
}

MaxFlow::Capacity MaxFlow::run(int source, int sink) {
    if (source == sink) throw InputError("max-flow source equals sink");
    Capacity total = 0;
    while (build_levels(source, sink)) {
        cursor_.assign(adjacency_.size(), 0);
        while (Capacity f = augment(source, sink, std::numeric_limits<Capacity>::max())) {
            total += f;
            if (total < 0) throw ResourceError("max-flow value overflow");
        }
    }
    return total;
}

std::vector<char> MaxFlow::source_side(int source) const {
    std::vector<char> seen(adjacency_.size(), 0);
    std::queue<int> q;
    seen[static_cast<std::size_t>(source)] = 1;
    q.push(source);
    while (!q.empty()) {
        const int u = q.front();
        q.pop();
        for (int a : adjacency_[static_cast<std::size_t>(u)]) {
            const Arc& arc = arcs_[static_cast<std::size_t>(a)];
            if (arc.residual > 0 && !seen[static_cast<std::size_t>(arc.to)]) {
                seen[static_cast<std::size_t>(arc.to)] = 1;
                q.push(arc.to);
            }
        }
    }
    return seen;
}

VertexCutResult min_vertex_cut(int n, const std::vector<std::pair<int, int>>& edges,
                               const std::vector<std::int64_t>& weight, const std::vector<int>& sources,
                               const std::vector<int>& sinks) {
    if (static_cast<int>(weight.size()) != n) throw InputError("vertex cut: weight table size mismatch");
    std::vector<char> terminal(static_cast<std::size_t>(n), 0);
    for (int v : sources) terminal.at(static_cast<std::size_t>(v)) = 1;
    for (int v : sinks) {
        if (terminal.at(static_cast<std::size_t>(v)) == 1) return {};  // a vertex on both sides cannot be separated
        terminal[static_cast<std::size_t>(v)] = 2;
    }

    std::int64_t finite = 0;
    for (int v = 0; v < n; ++v) {
        const auto w = weight[static_cast<std::size_t>(v)];
        if (w < kUncuttable) throw InputError("vertex cut: negative weight");
        if (w > 0 && !terminal[static_cast<std::size_t>(v)]) finite += w;
        if (finite < 0) throw ResourceError("vertex cut: weight overflow");
    }
    const std::int64_t inf = finite + 1;

    // Vertex v becomes in-node 2v and out-node 2v+1.
    // A single inf-capacity arc out of the root keeps the flow value bounded by inf.
    MaxFlow flow(2 * n + 3);
    const int root = 2 * n + 2;
    const int source = 2 * n;
    const int sink = 2 * n + 1;
    flow.add_edge(root, source, inf);
    for (int v = 0; v < n; ++v) {
        const auto w = weight[static_cast<std::size_t>(v)];
        const bool fixed = terminal[static_cast<std::size_t>(v)] || w == kUncuttable;
        flow.add_edge(2 * v, 2 * v + 1, fixed ? inf : w);
    }
    for (auto [a, b] : edges) {
        if (a < 0 || b < 0 || a >= n || b >= n) throw InputError("vertex cut: edge endpoint out of range");
        flow.add_edge(2 * a + 1, 2 * b, inf);
        flow.add_edge(2 * b + 1, 2 * a, inf);
    }
    for (int v : sources) flow.add_edge(source, 2 * v, inf);
    for (int v : sinks) flow.add_edge(2 * v + 1, sink, inf);

    VertexCutResult result;
    if (sources.empty() || sinks.empty()) {
        result.feasible = true;
        return result;
    }
    const auto value = flow.run(root, sink);
    if (value >= inf) return result;
    result.feasible = true;
    result.weight = value;
    const auto side = flow.source_side(root);
    for (int v = 0; v < n; ++v)
        if (side[static_cast<std::size_t>(2 * v)] && !side[static_cast<std::size_t>(2 * v + 1)]) result.cut.push_back(v);
    return result;
}

}  // namespace mcid
