#include "mcid/objectives.hpp"

#include <algorithm>
#include <chrono>
#include <ostream>
#include <random>

namespace mcid {

std::int64_t f_s(const Admg& g, const VertexSet& s, const VertexSet& i) {
    g.check_set(i);
    if (!disjoint(s, i)) throw InputError("f_s: intervention intersects the district");
    std::vector<Vertex> original;
    const Admg sub = induced(g, set_difference(g.all(), i), &original);
    VertexSet ls;
    for (Vertex v : s)
        ls.push_back(static_cast<Vertex>(std::lower_bound(original.begin(), original.end(), v) - original.begin()));
    return -static_cast<std::int64_t>(enumerate_hedges(sub, ls).size());
}

SubmodularObjective::SubmodularObjective(const Admg& g, VertexSet s, CostMap costs)
    : g_(g), s_(std::move(s)), costs_(std::move(costs)) {
    if (costs_.size() != static_cast<std::size_t>(g.size())) throw InputError("cost table size does not match graph");
    for (Vertex v : set_difference(g.all(), s_)) {
        if (costs_.is_infinite(v)) continue;
        domain_.push_back(v);
        denom_ += costs_[v];
    }
    hedges_ = enumerate_hedges(g, s_);
}

std::int64_t SubmodularObjective::f(const VertexSet& i) const {
    return -static_cast<std::int64_t>(
        std::count_if(hedges_.begin(), hedges_.end(), [&](const VertexSet& w) { return disjoint(w, i); }));
}

Rational SubmodularObjective::eval(const VertexSet& i) const {
    if (!is_subset(i, domain_)) throw InputError("objective argument outside its domain");
    return {f(i) * denom_ - costs_.total(i), denom_};
}

std::vector<VertexSet> SubmodularObjective::maximizers() const {
    if (domain_.size() > 20) throw ResourceError("objective domain too large for exhaustive maximisation");
    std::vector<VertexSet> best;
    std::optional<Rational> best_value;
    for (std::uint32_t mask = 0; mask < (1U << domain_.size()); ++mask) {
        VertexSet i;
        for (std::size_t k = 0; k < domain_.size(); ++k)
            if (mask >> k & 1U) i.push_back(domain_[k]);
        const Rational v = eval(i);
        if (!best_value || v > *best_value) {
            best_value = v;
            best.clear();
        }
        if (v == *best_value) best.push_back(std::move(i));
    }
    return best;
}

namespace {

struct HedgeCounter {
    std::vector<VertexSet> hedges;
    [[nodiscard]] std::int64_t f(const VertexSet& i) const {
        return -static_cast<std::int64_t>(
            std::count_if(hedges.begin(), hedges.end(), [&](const VertexSet& w) { return disjoint(w, i); }));
    }
    [[nodiscard]] bool diminishing(const VertexSet& a, const VertexSet& b, Vertex v) const {
        return f(set_union(a, {v})) - f(a) >= f(set_union(b, {v})) - f(b);
    }
};

void record(SubmodularityReport& report, const HedgeCounter& h, const VertexSet& a, const VertexSet& b, Vertex v) {
    ++report.triples;
    if (h.diminishing(a, b, v)) return;
    if (report.holds) report.counterexample = std::make_tuple(a, b, v);
    report.holds = false;
}

}  // namespace

SubmodularityReport check_submodularity(const Admg& g, const VertexSet& s, std::size_t trials, std::uint64_t seed) {
    const HedgeCounter h{enumerate_hedges(g, s)};
    const VertexSet ground = set_difference(g.all(), s);
    SubmodularityReport report;
    if (ground.empty()) return report;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, ground.size() - 1);
    std::bernoulli_distribution coin(0.5);
    for (std::size_t t = 0; t < trials; ++t) {
        const Vertex v = ground[pick(rng)];
        VertexSet a;
        VertexSet b;
        for (Vertex w : ground) {
            if (w == v || !coin(rng)) continue;
            b.push_back(w);
            if (coin(rng)) a.push_back(w);
        }
        record(report, h, a, b, v);
    }
    return report;
}

SubmodularityReport check_submodularity_exhaustive(const Admg& g, const VertexSet& s) {
    const VertexSet ground = set_difference(g.all(), s);
    if (ground.size() > 10) throw ResourceError("exhaustive submodularity check limited to 10 vertices");
    const HedgeCounter h{enumerate_hedges(g, s)};
    SubmodularityReport report;
    for (Vertex v : ground) {
        const VertexSet rest = set_difference(ground, {v});
        const auto n = rest.size();
        for (std::uint32_t bmask = 0; bmask < (1U << n); ++bmask) {
            VertexSet b;
            for (std::size_t k = 0; k < n; ++k)
                if (bmask >> k & 1U) b.push_back(rest[k]);
            // Submasks of bmask enumerate A ⊆ B.
            for (std::uint32_t amask = bmask;; amask = (amask - 1) & bmask) {
                VertexSet a;
                for (std::size_t k = 0; k < n; ++k)
                    if (amask >> k & 1U) a.push_back(rest[k]);
                record(report, h, a, b, v);
                if (amask == 0) break;
            }
        }
    }
    return report;
}

HedgeEnvironment::HedgeEnvironment(const Admg& g, VertexSet s, CostMap costs)
    : g_(g), s_(std::move(s)), costs_(std::move(costs)) {
    if (costs_.size() != static_cast<std::size_t>(g.size())) throw InputError("cost table size does not match graph");
    if (!is_district(g, s_)) throw InputError("environment target is not a district");
    reset();
}

const MdpState& HedgeEnvironment::reset() {
    state_ = {hedge_hull(g_, s_), {}, 0};
    return state_;
}

VertexSet HedgeEnvironment::legal_actions() const {
    VertexSet out;
    for (Vertex v : set_difference(state_.hull, s_))
        if (!costs_.is_infinite(v)) out.push_back(v);
    return out;
}

std::size_t HedgeEnvironment::hull_size_after(Vertex a) const {
    VertexMask within = to_mask(g_.size(), state_.hull);
    within[static_cast<std::size_t>(a)] = 0;
    const VertexMask h = hedge_hull_mask(g_, s_, std::move(within));
    return static_cast<std::size_t>(std::count(h.begin(), h.end(), 1));
}

StepResult HedgeEnvironment::step(Vertex action) {
    if (terminal()) throw ActionError("episode already terminated");
    if (action < 0 || action >= g_.size()) throw ActionError("action is not a vertex");
    if (!contains(state_.hull, action) || contains(s_, action))
        throw ActionError("action " + g_.label(action) + " is not in the current hull outside the district");
    if (costs_.is_infinite(action)) throw ActionError("action " + g_.label(action) + " has infinite cost");

    // Deleting a vertex from the current hull gives the hull of V_t \ {a}.
    VertexMask within = to_mask(g_.size(), state_.hull);
    within[static_cast<std::size_t>(action)] = 0;
    state_.hull = from_mask(hedge_hull_mask(g_, s_, std::move(within)));
    state_.removed = set_union(state_.removed, {action});
    const Cost reward = -costs_[action];
    state_.accumulated_reward += reward;
    return {state_, reward, terminal()};
}

Policy parse_policy(std::string_view name) {
    if (name == "greedy_cost") return Policy::kGreedyCost;
    if (name == "greedy_ratio") return Policy::kGreedyRatio;
    if (name == "random") return Policy::kRandom;
    throw ConfigError("unknown policy '" + std::string(name) + "'");
}

RolloutResult rollout(const Admg& g, const VertexSet& s, const CostMap& costs, Policy policy, std::uint64_t seed) {
    const auto start = std::chrono::steady_clock::now();
    HedgeEnvironment env(g, s, costs);
    std::mt19937_64 rng(seed);
    RolloutResult result;
    while (!env.terminal()) {
        const VertexSet actions = env.legal_actions();
        if (actions.empty()) throw InfeasibleError("remaining hull contains only infinite-cost vertices");
        Vertex choice = actions.front();
        switch (policy) {
        case Policy::kGreedyCost:
            for (Vertex v : actions)
                if (costs[v] < costs[choice]) choice = v;
            break;
        case Policy::kGreedyRatio: {
            // Maximise hull shrinkage per unit cost; zero-cost actions rank first.
            const std::size_t now = env.state().hull.size();
            std::size_t best_gain = now - env.hull_size_after(choice);
            for (Vertex v : actions) {
                const std::size_t gain = now - env.hull_size_after(v);
                const auto lhs = static_cast<__int128>(gain) * costs[choice];
                const auto rhs = static_cast<__int128>(best_gain) * costs[v];
                if (lhs > rhs) {
                    choice = v;
                    best_gain = gain;
                }
            }
            break;
        }
        case Policy::kRandom: {
            std::uniform_int_distribution<std::size_t> pick(0, actions.size() - 1);
            choice = actions[pick(rng)];
            break;
        }
        }
        const std::size_t before = env.state().hull.size();
        const StepResult r = env.step(choice);
        result.steps.push_back({before, choice, r.reward});
    }
    result.total_reward = env.state().accumulated_reward;
    result.report.method = "rollout";
    result.report.status = "heuristic";
    result.report.solution = InterventionFamily::of({env.state().removed}, costs);
    result.report.solution.serves = {0};
    result.report.cost = result.report.solution.total_cost;
    result.report.nodes_explored = result.steps.size();
    result.report.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return result;
}

void write_trajectory(std::ostream& out, const Admg& g, const std::vector<TrajectoryStep>& steps) {
    for (const auto& st : steps) out << st.hull_size << ' ' << g.label(st.action) << ' ' << st.reward << '\n';
}

}  // namespace mcid
