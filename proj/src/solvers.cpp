#include "mcid/solvers.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <limits>
#include <numeric>

#include "mcid/adjustment.hpp"
#include "mcid/ilp.hpp"
#include "mcid/sat_reference.hpp"

namespace mcid {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Hitting-set search state over a universe renumbered 0..U-1.
struct HittingSearch {
    std::vector<std::vector<int>> sets;  // elements sorted by (cost, index)
    std::vector<Cost> cost;
    const Deadline& deadline;
    std::vector<char> chosen;
    std::vector<char> banned;
    Cost best = kInfiniteCost;
    std::vector<char> best_choice;
    std::size_t nodes = 0;

    [[nodiscard]] bool covered(const std::vector<int>& set) const {
        return std::any_of(set.begin(), set.end(), [&](int e) { return chosen[static_cast<std::size_t>(e)] != 0; });
    }

    [[nodiscard]] Cost cheapest_available(const std::vector<int>& set) const {
        for (int e : set)
            if (!banned[static_cast<std::size_t>(e)]) return cost[static_cast<std::size_t>(e)];
        return kInfiniteCost;
    }

    void run(Cost so_far) {
        deadline.check();
        ++nodes;
        std::vector<std::size_t> open;
        for (std::size_t i = 0; i < sets.size(); ++i)
            if (!covered(sets[i])) open.push_back(i);
        if (open.empty()) {
            if (so_far < best) {
                best = so_far;
                best_choice = chosen;
            }
            return;
        }
        auto available = [&](std::size_t i) {
            return static_cast<std::size_t>(std::count_if(sets[i].begin(), sets[i].end(),
                                                          [&](int e) { return !banned[static_cast<std::size_t>(e)]; }));
        };
        std::stable_sort(open.begin(), open.end(), [&](std::size_t a, std::size_t b) { return available(a) < available(b); });

        // Lower bound: greedily pack pairwise disjoint open sets.
        Cost bound = so_far;
        std::vector<char> used(chosen.size(), 0);
        for (std::size_t i : open) {
            const auto& set = sets[i];
            if (std::any_of(set.begin(), set.end(), [&](int e) { return used[static_cast<std::size_t>(e)] != 0; }))
                continue;
            const Cost c = cheapest_available(set);
            if (c == kInfiniteCost) return;  // nothing left to hit this set with
            bound = saturating_add(bound, c);
            for (int e : set) used[static_cast<std::size_t>(e)] = 1;
        }
        if (bound >= best) return;

        const auto& branch = sets[open.front()];
        std::vector<int> tried;
        for (int e : branch) {
            if (banned[static_cast<std::size_t>(e)]) continue;
            chosen[static_cast<std::size_t>(e)] = 1;
            run(so_far + cost[static_cast<std::size_t>(e)]);
            chosen[static_cast<std::size_t>(e)] = 0;
            // Later branches exclude elements already tried here.
            banned[static_cast<std::size_t>(e)] = 1;
            tried.push_back(e);
        }
        for (int e : tried) banned[static_cast<std::size_t>(e)] = 0;
    }
};

struct SubsetScan {
    const Admg& g;
    const VertexSet& s;
    VertexSet candidates;
    std::vector<Cost> cost;
    VertexMask hull;

    [[nodiscard]] Cost mask_cost(std::uint64_t mask) const {
        Cost c = 0;
        for (std::size_t i = 0; i < candidates.size(); ++i)
            if (mask >> i & 1U) c += cost[i];
        return c;
    }

    [[nodiscard]] bool hits(std::uint64_t mask) const {
        VertexMask within = hull;
        for (std::size_t i = 0; i < candidates.size(); ++i)
            if (mask >> i & 1U) within[static_cast<std::size_t>(candidates[i])] = 0;
        const VertexMask h = hedge_hull_mask(g, s, std::move(within));
        return static_cast<std::size_t>(std::count(h.begin(), h.end(), 1)) == s.size();
    }

    // Best (cost, mask) among masks in [begin, end); cost kInfiniteCost when none is feasible.
    // `shared` holds the best cost found by any chunk; masks strictly above it are skipped.
    std::pair<Cost, std::uint64_t> scan(std::uint64_t begin, std::uint64_t end, const Deadline& deadline,
                                        std::atomic<Cost>* shared = nullptr) const {
        std::pair<Cost, std::uint64_t> best{kInfiniteCost, 0};
        for (std::uint64_t mask = begin; mask < end; ++mask) {
            if ((mask & 0xFFFU) == 0) deadline.check();
            const Cost c = mask_cost(mask);
            if (c >= best.first) continue;
            if (shared && c > shared->load(std::memory_order_relaxed)) continue;
            if (!hits(mask)) continue;
            best = {c, mask};
            if (shared) {
                Cost seen = shared->load(std::memory_order_relaxed);
                while (c < seen && !shared->compare_exchange_weak(seen, c, std::memory_order_relaxed)) {
                }
            }
        }
        return best;
    }

    VertexSet subset(std::uint64_t mask) const {
        VertexSet out;
        for (std::size_t i = 0; i < candidates.size(); ++i)
            if (mask >> i & 1U) out.push_back(candidates[i]);
        return make_set(std::move(out));
    }
};

SubsetScan prepare_scan(const Admg& g, const VertexSet& s, const CostMap& costs) {
    if (costs.size() != static_cast<std::size_t>(g.size())) throw InputError("cost table size does not match graph");
    const VertexSet hull = hedge_hull(g, s);
    SubsetScan scan{g, s, {}, {}, to_mask(g.size(), hull)};
    for (Vertex v : set_difference(hull, s)) {
        if (costs.is_infinite(v)) continue;
        scan.candidates.push_back(v);
        scan.cost.push_back(costs[v]);
    }
    if (scan.candidates.size() > kBruteForceSingleGuard)
        throw ResourceError("brute force limited to " + std::to_string(kBruteForceSingleGuard) + " candidate vertices");
    return scan;
}

SolveReport finish_single(const SubsetScan& scan, std::pair<Cost, std::uint64_t> best, const CostMap& costs,
                          Clock::time_point start, std::string method) {
    if (best.first == kInfiniteCost) throw InfeasibleError("no finite-cost intervention hits every hedge");
    SolveReport r;
    r.method = std::move(method);
    r.solution = InterventionFamily::of({scan.subset(best.second)}, costs);
    r.solution.serves = {0};
    r.cost = r.solution.total_cost;
    r.nodes_explored = std::size_t{1} << scan.candidates.size();
    r.wall_time_ms = elapsed_ms(start);
    return r;
}

}  // namespace

HittingSetResult hitting_set_bnb(const HittingSetInstance& inst, const Deadline& deadline) {
    const VertexSet& u = inst.universe;
    auto local = [&](Vertex v) {
        auto it = std::lower_bound(u.begin(), u.end(), v);
        if (it == u.end() || *it != v) throw InputError("hitting set element outside the universe");
        return static_cast<int>(it - u.begin());
    };

    HittingSearch search{{}, {}, deadline, std::vector<char>(u.size(), 0), std::vector<char>(u.size(), 0), kInfiniteCost, {}, 0};
    for (Vertex v : u) search.cost.push_back(inst.costs[v]);
    for (std::size_t e = 0; e < u.size(); ++e)
        if (search.cost[e] == kInfiniteCost) search.banned[e] = 1;
    for (const auto& set : inst.sets) {
        if (set.empty()) throw InputError("hitting set instance contains an empty set");
        std::vector<int> elems;
        for (Vertex v : set) elems.push_back(local(v));
        std::stable_sort(elems.begin(), elems.end(), [&](int a, int b) {
            return search.cost[static_cast<std::size_t>(a)] < search.cost[static_cast<std::size_t>(b)];
        });
        if (std::all_of(elems.begin(), elems.end(), [&](int e) { return search.banned[static_cast<std::size_t>(e)] != 0; }))
            throw InfeasibleError("a set contains only infinite-cost elements");
        search.sets.push_back(std::move(elems));
    }

    search.run(0);
    if (search.best == kInfiniteCost) throw InfeasibleError("no finite-cost hitting set");
    HittingSetResult r;
    for (std::size_t e = 0; e < u.size(); ++e)
        if (search.best_choice[e]) r.set.push_back(u[e]);
    r.cost = search.best;
    r.nodes = search.nodes;
    return r;
}

SolveReport brute_force_single(const Admg& g, const VertexSet& s, const CostMap& costs, const Deadline& deadline) {
    const auto start = Clock::now();
    const SubsetScan scan = prepare_scan(g, s, costs);
    const auto best = scan.scan(0, std::uint64_t{1} << scan.candidates.size(), deadline);
    return finish_single(scan, best, costs, start, "brute");
}

SolveReport brute_force_single_parallel(const Admg& g, const VertexSet& s, const CostMap& costs,
                                        const Deadline& deadline) {
    const auto start = Clock::now();
    const SubsetScan scan = prepare_scan(g, s, costs);
    const std::int64_t total = std::int64_t{1} << scan.candidates.size();
    constexpr std::int64_t kChunk = 256;
    const std::int64_t chunks = (total + kChunk - 1) / kChunk;
    std::vector<std::pair<Cost, std::uint64_t>> partial(static_cast<std::size_t>(chunks), {kInfiniteCost, 0});
    bool timed_out = false;
    std::atomic<Cost> shared{kInfiniteCost};

#pragma omp parallel for schedule(dynamic)
    for (std::int64_t c = 0; c < chunks; ++c) {
        if (timed_out) continue;
        try {
            const auto begin = static_cast<std::uint64_t>(c * kChunk);
            const auto end = static_cast<std::uint64_t>(std::min(total, (c + 1) * kChunk));
            partial[static_cast<std::size_t>(c)] = scan.scan(begin, end, deadline, &shared);
        } catch (const TimeoutError&) {
#pragma omp atomic write
            timed_out = true;
        }
    }
    if (timed_out) throw TimeoutError("time limit exceeded");
    // Chunks are in mask order, so the lexicographic minimum matches the serial scan.
    const auto best = *std::min_element(partial.begin(), partial.end());
    return finish_single(scan, best, costs, start, "brute");
}

SolveReport brute_force_family(const PreparedQuery& pq, const CostMap& costs, int r, const Deadline& deadline) {
    const auto start = Clock::now();
    const int n = pq.g.size();
    if (n > kBruteForceFamilyMaxVertices) throw ResourceError("family brute force limited to 8 vertices");
    if (r < 1 || r > kBruteForceFamilyMaxMembers) throw ResourceError("family brute force limited to 2 members");
    if (costs.size() != static_cast<std::size_t>(n)) throw InputError("cost table size does not match graph");

    std::vector<VertexSet> subsets;
    for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
        VertexSet set;
        for (int v = 0; v < n; ++v)
            if (mask >> v & 1U) set.push_back(v);
        if (costs.total(set) != kInfiniteCost) subsets.push_back(std::move(set));
    }

    // hits[l][k]: subset k avoids district l and hits all of its hedges.
    const std::size_t districts = pq.districts.size();
    std::vector<std::vector<char>> hits(districts, std::vector<char>(subsets.size(), 0));
    for (std::size_t l = 0; l < districts; ++l)
        for (std::size_t k = 0; k < subsets.size(); ++k)
            hits[l][k] = disjoint(subsets[k], pq.districts[l]) && hits_all_hedges(pq.g, pq.districts[l], subsets[k]);

    SolveReport report;
    report.method = "brute_family";
    Cost best_member = kInfiniteCost;
    Cost best_district = kInfiniteCost;
    std::vector<std::size_t> best_family;
    auto consider = [&](const std::vector<std::size_t>& family) {
        ++report.nodes_explored;
        Cost member_cost = 0;
        for (std::size_t k : family) member_cost += costs.total(subsets[k]);
        Cost district_cost = 0;
        for (std::size_t l = 0; l < districts; ++l) {
            Cost cheapest = kInfiniteCost;
            for (std::size_t k : family)
                if (hits[l][k]) cheapest = std::min(cheapest, costs.total(subsets[k]));
            if (cheapest == kInfiniteCost) return;
            district_cost += cheapest;
        }
        if (member_cost < best_member) {
            best_member = member_cost;
            best_family = family;
        }
        best_district = std::min(best_district, district_cost);
    };
    for (std::size_t a = 0; a < subsets.size(); ++a) {
        deadline.check();
        consider({a});
        if (r >= 2)
            for (std::size_t b = a + 1; b < subsets.size(); ++b) consider({a, b});
    }
    if (best_member == kInfiniteCost) throw InfeasibleError("no family of finite cost identifies the query");

    std::vector<VertexSet> sets;
    for (std::size_t k : best_family) sets.push_back(subsets[k]);
    report.solution = InterventionFamily::of(std::move(sets), costs);
    report.solution.serves.assign(districts, -1);
    for (std::size_t l = 0; l < districts; ++l)
        for (std::size_t i = 0; i < best_family.size(); ++i)
            if (hits[l][best_family[i]] && report.solution.serves[l] < 0) report.solution.serves[l] = static_cast<int>(i);
    report.cost = best_member;
    report.per_district_cost = best_district;
    report.wall_time_ms = elapsed_ms(start);
    return report;
}

SolveReport mhs_solve(const Admg& g, const VertexSet& s, const CostMap& costs, const Deadline& deadline) {
    const auto start = Clock::now();
    if (costs.size() != static_cast<std::size_t>(g.size())) throw InputError("cost table size does not match graph");
    const VertexSet hull = hedge_hull(g, s);
    HittingSetInstance inst{set_difference(hull, s), {}, costs};

    SolveReport report;
    report.method = "mhs";
    while (true) {
        deadline.check();
        const HittingSetResult hs = hitting_set_bnb(inst, deadline);
        report.nodes_explored += hs.nodes;
        report.bound_trace.push_back(hs.cost);
        if (hits_all_hedges(g, s, hs.set)) {
            report.solution = InterventionFamily::of({hs.set}, costs);
            report.solution.serves = {0};
            break;
        }
        const auto hedge = find_minimal_hedge(g, s, hs.set, costs);
        if (!hedge) throw VerificationError("hedge search disagrees with hull test");
        inst.sets.push_back(set_difference(*hedge, s));
        ++report.hedges_discovered;
    }
    report.cost = report.solution.total_cost;
    report.wall_time_ms = elapsed_ms(start);
    return report;
}

Method parse_method(std::string_view name) {
    if (name == "sat") return Method::kSat;
    if (name == "ilp") return Method::kIlp;
    if (name == "mhs") return Method::kMhs;
    if (name == "brute") return Method::kBrute;
    if (name == "adjust" || name == "adjust_heuristic") return Method::kAdjustHeuristic;
    if (name == "h1") return Method::kH1;
    throw ConfigError("unknown method '" + std::string(name) + "'");
}

std::string_view method_name(Method m) {
    switch (m) {
    case Method::kSat:
        return "sat";
    case Method::kIlp:
        return "ilp";
    case Method::kMhs:
        return "mhs";
    case Method::kBrute:
        return "brute";
    case Method::kAdjustHeuristic:
        return "adjust";
    case Method::kH1:
        return "h1";
    }
    return "?";
}

bool hulls_disjoint(const PreparedQuery& pq) {
    VertexSet seen;
    for (const auto& d : pq.districts) {
        const VertexSet hull = hedge_hull(pq.g, d);
        if (!disjoint(seen, hull)) return false;
        seen = set_union(seen, hull);
    }
    return true;
}

namespace {

// Runs a single-district backend on every district and concatenates the results.
template <typename PerDistrict>
SolveReport per_district(const PreparedQuery& pq, const CostMap& costs, std::string method, PerDistrict solve_one) {
    SolveReport total;
    total.method = std::move(method);
    std::vector<VertexSet> sets;
    for (const auto& d : pq.districts) {
        SolveReport r = solve_one(d);
        sets.push_back(r.solution.sets.front());
        total.nodes_explored += r.nodes_explored;
        total.hedges_discovered += r.hedges_discovered;
        total.bound_trace.insert(total.bound_trace.end(), r.bound_trace.begin(), r.bound_trace.end());
        total.status = r.status;
    }
    total.solution = InterventionFamily::of(std::move(sets), costs);
    total.solution.serves.resize(pq.districts.size());
    std::iota(total.solution.serves.begin(), total.solution.serves.end(), 0);
    total.cost = total.solution.total_cost;
    return total;
}

Encoding encode(const PreparedQuery& pq) {
    return pq.districts.size() == 1 ? build_cnf_single(pq.g, pq.districts.front()) : build_cnf_multi(pq);
}

SolveReport finish_encoded(const PreparedQuery& pq, const CostMap& costs, const Encoding& enc,
                           const std::vector<bool>& model, std::string method) {
    SolveReport r;
    r.method = std::move(method);
    r.solution = decode_model(enc.cnf, enc.vars, model, costs);
    if (!is_identifiable(pq, r.solution)) throw VerificationError("decoded family does not identify the query");
    r.cost = r.solution.total_cost;
    return r;
}

SolveReport solve_sat(const PreparedQuery& pq, const CostMap& costs, const SolveOptions& opt) {
    const Encoding enc = encode(pq);
    const WcnfInstance w = attach_soft(enc, costs, opt.soft_form);
    Backend backend = opt.backend;
    if (backend == Backend::kAuto) backend = opt.maxsat_command ? Backend::kExternal : Backend::kReference;

    switch (backend) {
    case Backend::kExternal: {
        if (!opt.maxsat_command) throw ConfigError("no MaxSAT solver command configured");
        const MaxSatOutput out = run_maxsat_solver(*opt.maxsat_command, w);
        if (out.status == SolverStatus::kUnsatisfiable) throw InfeasibleError("hard clauses are unsatisfiable");
        if (out.model.empty()) throw ConfigError("MaxSAT solver returned no model");
        SolveReport r = finish_encoded(pq, costs, enc, out.model, "sat");
        if (out.status != SolverStatus::kOptimum) r.status = "feasible";
        return r;
    }
    case Backend::kEnumerate: {
        const auto models = enumerate_models(enc.cnf, enc.vars, opt.enumeration_cap, opt.deadline);
        if (models.empty()) throw InfeasibleError("hard clauses are unsatisfiable");
        if (enc.vars.multi && opt.soft_form == SoftForm::kLiteral)
            throw ConfigError("enumeration backend needs the per-slot cost form");
        // Under unit soft clauses a projected model costs the sum of its slot sets.
        const ProjectedModel* best = nullptr;
        Cost best_cost = kInfiniteCost;
        for (const auto& m : models) {
            const Cost c = family_cost(m, costs);
            if (c < best_cost) {
                best_cost = c;
                best = &m;
            }
        }
        CnfFormula fixed = enc.cnf;
        for (std::size_t k = 0; k < best->size(); ++k)
            for (Vertex v : enc.vars.layer0_vertices) {
                const int var = enc.vars.at({VarTag::Kind::kLayer0, v, 0, static_cast<int>(k), 0});
                fixed.add({contains((*best)[k], v) ? Literal::neg(var) : Literal::pos(var)});
            }
        const auto model = sat::solve(fixed, opt.deadline);
        if (!model) throw VerificationError("projected model does not extend to a full model");
        return finish_encoded(pq, costs, enc, *model, "sat");
    }
    case Backend::kReference:
    case Backend::kAuto: {
        const sat::MaxSatResult res = sat::solve_maxsat(w, opt.deadline);
        if (!res.satisfiable) throw InfeasibleError("hard clauses are unsatisfiable");
        SolveReport r = finish_encoded(pq, costs, enc, res.model, "sat");
        r.nodes_explored = res.nodes;
        return r;
    }
    }
    throw ConfigError("unsupported backend");
}

SolveReport solve_ilp_method(const PreparedQuery& pq, const CostMap& costs, const SolveOptions& opt) {
    const Encoding enc = encode(pq);
    const WcnfInstance w = attach_soft(enc, costs, opt.soft_form);
    const IlpInstance ilp = build_ilp(w);
    Backend backend = opt.backend;
    if (backend == Backend::kAuto) backend = opt.ilp_command ? Backend::kExternal : Backend::kReference;

    std::vector<bool> values;
    SolverStatus status = SolverStatus::kOptimum;
    std::size_t nodes = 0;
    if (backend == Backend::kExternal) {
        if (!opt.ilp_command) throw ConfigError("no ILP solver command configured");
        const LpSolution sol = run_ilp_solver(*opt.ilp_command, ilp);
        if (sol.status == SolverStatus::kUnsatisfiable) throw InfeasibleError("ILP is infeasible");
        if (sol.status == SolverStatus::kUnknown) throw ConfigError("ILP solver returned no solution");
        values = sol.values;
        status = sol.status;
    } else if (backend == Backend::kReference) {
        const IlpResult res = solve_ilp(ilp, opt.deadline);
        if (!res.feasible) throw InfeasibleError("ILP is infeasible");
        values = res.values;
        nodes = res.nodes;
    } else {
        throw ConfigError("enumeration backend is only available for the sat method");
    }
    SolveReport r = finish_encoded(pq, costs, enc, sat_model_from_ilp(ilp, values, w.hard.num_vars), "ilp");
    if (status != SolverStatus::kOptimum) r.status = "feasible";
    r.nodes_explored = nodes;
    return r;
}

}  // namespace

SolveReport solve(const PreparedQuery& pq, const CostMap& costs, Method method, const SolveOptions& options) {
    const auto start = Clock::now();
    if (costs.size() != static_cast<std::size_t>(pq.g.size())) throw InputError("cost table size does not match graph");
    const bool single = pq.districts.size() == 1;
    SolveReport report;
    switch (method) {
    case Method::kSat:
        report = solve_sat(pq, costs, options);
        break;
    case Method::kIlp:
        report = solve_ilp_method(pq, costs, options);
        break;
    case Method::kBrute:
        if (single) {
            report = brute_force_single(pq.g, pq.districts.front(), costs, options.deadline);
        } else if (hulls_disjoint(pq)) {
            report = per_district(pq, costs, "brute", [&](const VertexSet& d) {
                return brute_force_single(pq.g, d, costs, options.deadline);
            });
        } else if (pq.g.size() <= kBruteForceFamilyMaxVertices &&
                   static_cast<int>(pq.districts.size()) <= kBruteForceFamilyMaxMembers) {
            report = brute_force_family(pq, costs, static_cast<int>(pq.districts.size()), options.deadline);
            report.method = "brute";
            report.per_district_cost.reset();
        } else {
            throw ConfigError("brute force needs one district, disjoint hulls, or a tiny graph");
        }
        break;
    case Method::kMhs:
        if (single || hulls_disjoint(pq)) {
            report = per_district(pq, costs, "mhs", [&](const VertexSet& d) {
                return mhs_solve(pq.g, d, costs, options.deadline);
            });
        } else {
            report = solve_sat(pq, costs, options);
            report.method = "mhs";
            report.status = "delegated:sat";
        }
        break;
    case Method::kAdjustHeuristic:
        report.method = "adjust";
        report.solution = heuristic_mcid(pq, costs);
        report.cost = report.solution.total_cost;
        report.status = "heuristic";
        break;
    case Method::kH1: {
        report = per_district(pq, costs, "h1", [&](const VertexSet& d) {
            SolveReport r;
            r.solution = InterventionFamily::of({h1_baseline(pq.g, d, costs)}, costs);
            return r;
        });
        if (!is_identifiable(pq, report.solution)) throw VerificationError("H1 family does not identify the query");
        report.status = "heuristic";
        break;
    }
    }
    if (report.cost != family_cost(report.solution.sets, costs)) throw VerificationError("reported cost mismatch");
    report.wall_time_ms = elapsed_ms(start);
    return report;
}

}  // namespace mcid
