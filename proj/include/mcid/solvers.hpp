#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mcid/encode.hpp"
#include "mcid/errors.hpp"
#include "mcid/hedge.hpp"
#include "mcid/solver_bridge.hpp"

namespace mcid {

struct HittingSetInstance {
    VertexSet universe;
    std::vector<VertexSet> sets;
    CostMap costs;  // indexed by vertex
};

struct HittingSetResult {
    VertexSet set;
    Cost cost = 0;
    std::size_t nodes = 0;
};

/// Exact minimum-cost hitting set. Branches on the uncovered set with fewest elements, trying
/// its elements cheapest first; bounds with a packing of pairwise disjoint uncovered sets.
/// Infinite-cost elements are never chosen; a set with no finite element raises InfeasibleError.
HittingSetResult hitting_set_bnb(const HittingSetInstance& inst, const Deadline& deadline = {});

struct SolveReport {
    std::string method;
    InterventionFamily solution;
    Cost cost = 0;
    std::optional<VertexSet> adjustment;  // Z, when the method produces one
    std::size_t nodes_explored = 0;
    std::size_t hedges_discovered = 0;
    std::vector<Cost> bound_trace;  // MHS lower bound per iteration
    double wall_time_ms = 0;
    std::string status = "optimal";
    std::optional<Cost> per_district_cost;  // brute_force_family only
};

inline constexpr std::size_t kBruteForceSingleGuard = 20;
inline constexpr int kBruteForceFamilyMaxVertices = 8;
inline constexpr int kBruteForceFamilyMaxMembers = 2;

/// Serial reference scan over subsets of hull \ s (finite-cost vertices only) in ascending
/// mask order; returns the feasible subset minimising (cost, mask).
SolveReport brute_force_single(const Admg& g, const VertexSet& s, const CostMap& costs, const Deadline& deadline = {});
/// Same scan split across OpenMP threads; returns exactly the serial answer.
SolveReport brute_force_single_parallel(const Admg& g, const VertexSet& s, const CostMap& costs,
                                        const Deadline& deadline = {});

/// Exhaustive search over families of at most r subsets of V. `cost` is the optimum when each
/// member is paid once; `per_district_cost` the optimum when a member is paid once per
/// district it serves.
SolveReport brute_force_family(const PreparedQuery& pq, const CostMap& costs, int r, const Deadline& deadline = {});

/// Lazy constraint generation: solve a hitting set over the hedges found so far, stop when
/// it hits every hedge, otherwise add one minimal hedge avoiding it.
SolveReport mhs_solve(const Admg& g, const VertexSet& s, const CostMap& costs, const Deadline& deadline = {});

enum class Method { kSat, kIlp, kMhs, kBrute, kAdjustHeuristic, kH1 };

Method parse_method(std::string_view name);
std::string_view method_name(Method m);

enum class Backend {
    kAuto,       // external command when configured, otherwise the internal reference engine
    kReference,  // internal branch and bound (MaxSAT) / implicit enumeration (ILP)
    kEnumerate,  // projected model enumeration (sat only, tiny instances)
    kExternal,   // external command; ConfigError when none is configured
};

struct SolveOptions {
    std::optional<SolverCommand> maxsat_command;
    std::optional<SolverCommand> ilp_command;
    Backend backend = Backend::kAuto;
    SoftForm soft_form = SoftForm::kPerSlotUnit;
    std::size_t enumeration_cap = 1u << 20;
    Deadline deadline;
};

/// Dispatches to a backend. `costs` is indexed like pq.g; the returned family too.
SolveReport solve(const PreparedQuery& pq, const CostMap& costs, Method method, const SolveOptions& options = {});

/// True when the hedge hulls of the districts are pairwise disjoint.
bool hulls_disjoint(const PreparedQuery& pq);

}  // namespace mcid
