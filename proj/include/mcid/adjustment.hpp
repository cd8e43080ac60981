#pragma once

#include "mcid/admg.hpp"
#include "mcid/hedge.hpp"

namespace mcid {

/// Removes, one at a time in ascending index order and rescanning after each removal, any
/// x' ∈ x that is d-separated from y given x \ {x'} once edges into the current x are cut.
VertexSet make_x_minimal(const Admg& g, const VertexSet& x, const VertexSet& y);

struct AdjustmentResult {
    VertexSet intervention;  // I
    VertexSet adjustment;    // Z
    Cost cost = 0;
    VertexSet x_minimal;
    VertexSet s;          // Anc_{V\X}(Y) for the minimal X
    VertexSet parents_s;  // Pa(S)
};

/// Minimum-cost intervention admitting a generalized adjustment set under the vertex-cut
/// criterion, found as a weighted minimum vertex cut on the split network of G^d with edges
/// out of Pa(S) removed. All returned sets index into g. Throws InfeasibleError when every
/// cut has infinite cost.
AdjustmentResult gen_adjustment(const Admg& g, const VertexSet& x, const VertexSet& y, const CostMap& costs);

/// Vertex-cut criterion: restricted to Anc(x ∪ y), with S = Anc_{V\x}(y), z avoids S, Pa(S)
/// and latent vertices, z ⊆ Anc(S), and z separates Pa(S) from S in the moral graph of g with
/// edges into i and out of Pa(S) removed.
bool verify_adjustment(const Admg& g, const VertexSet& x, const VertexSet& y, const VertexSet& i,
                       const VertexSet& z);

/// Cheapest I ⊆ hull \ s (parents of s included) leaving no bidirected path from Pa(s) to s
/// inside the hedge hull once I is intervened on.
VertexSet h1_baseline(const Admg& g, const VertexSet& s, const CostMap& costs);

/// Runs gen_adjustment on each district's hedge hull with X = Pa(S_l), Y = S_l. Returns one
/// member per district (members are not merged). Costs index pq.g.
InterventionFamily heuristic_mcid(const PreparedQuery& pq, const CostMap& costs);

}  // namespace mcid
