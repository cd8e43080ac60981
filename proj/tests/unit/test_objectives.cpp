#include <doctest.h>

#include <sstream>

#include "fixtures.hpp"
#include "mcid/objectives.hpp"
#include "oracles.hpp"

using namespace mcid;

namespace {

std::int64_t oracle_f(const std::vector<oracle::Mask>& hs, oracle::Mask i) {
    std::int64_t n = 0;
    for (oracle::Mask w : hs) n += (w & i) == 0;
    return -n;
}

oracle::Mask oracle_hull_after(const std::vector<oracle::Mask>& hs, oracle::Mask s, oracle::Mask removed) {
    oracle::Mask h = s;
    for (oracle::Mask w : hs)
        if ((w & removed) == 0) h |= w;
    return h;
}

}  // namespace

TEST_CASE("f_S counts surviving hedges") {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        const auto inst = fixtures::random_instance(seed, 8, 0.35, 0.45);
        const PreparedQuery pq = prepare(inst.g, inst.x, inst.y);
        const VertexSet& d = pq.districts.front();
        const auto hs = oracle::hedges(pq.g, oracle::to_mask(d));
        const oracle::Mask rest = (oracle::bit(pq.g.size()) - 1) & ~oracle::to_mask(d);
        const SubmodularObjective obj(pq.g, d, pq.project(inst.costs));
        CHECK(obj.hedges().size() == hs.size());
        for (oracle::Mask i = rest;; i = (i - 1) & rest) {
            const VertexSet is = oracle::from_mask(i);
            CHECK(f_s(pq.g, d, is) == oracle_f(hs, i));
            if (is_subset(is, obj.domain())) CHECK(obj.f(is) == oracle_f(hs, i));
            if (i == 0) break;
        }
    }
    const GraphFile f = fixtures::two_hedge();
    CHECK_THROWS_AS(f_s(f.graph, {f.graph.at("S")}, {f.graph.at("S")}), InputError);
}

TEST_CASE("objective values are exact rationals") {
    const GraphFile f = fixtures::two_hedge();
    const Admg& g = f.graph;
    const SubmodularObjective obj(g, {g.at("S")}, f.costs);
    CHECK(obj.denominator() == 7);
    CHECK(obj.eval({}) == Rational{-2, 1});
    CHECK(obj.eval({g.at("X1")}) == Rational{-1, 7});
    CHECK(obj.eval({g.at("X2")}) == Rational{-7 - 3, 7});
    CHECK(obj.eval({g.at("X1")}) > obj.eval({g.at("X3")}));
    CHECK(Rational{2, 4} == Rational{1, 2});
    CHECK(Rational{1, 3} < Rational{1, 2});
    CHECK(Rational{-1, 7}.to_double() == doctest::Approx(-1.0 / 7));
}

TEST_CASE("f_S is submodular on every triple") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        const auto inst = fixtures::random_instance(seed, 7, 0.35, 0.5);
        const PreparedQuery pq = prepare(inst.g, inst.x, inst.y);
        const VertexSet& d = pq.districts.front();
        const oracle::Mask dm = oracle::to_mask(d);
        const auto hs = oracle::hedges(pq.g, dm);
        const oracle::Mask ground = (oracle::bit(pq.g.size()) - 1) & ~dm;
        std::size_t triples = 0;
        for (Vertex v : oracle::from_mask(ground)) {
            const oracle::Mask rest = ground & ~oracle::bit(v);
            for (oracle::Mask b = rest;; b = (b - 1) & rest) {
                for (oracle::Mask a = b;; a = (a - 1) & b) {
                    CHECK(oracle_f(hs, a | oracle::bit(v)) - oracle_f(hs, a) >=
                          oracle_f(hs, b | oracle::bit(v)) - oracle_f(hs, b));
                    ++triples;
                    if (a == 0) break;
                }
                if (b == 0) break;
            }
        }
        const SubmodularityReport rep = check_submodularity_exhaustive(pq.g, d);
        CHECK(rep.holds);
        CHECK(rep.triples == triples);
        CHECK(check_submodularity(pq.g, d, 500, seed).holds);
    }
}

TEST_CASE("maximisers remove every hedge at minimum cost") {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        const auto inst = fixtures::random_instance(seed, 9, 0.35, 0.45);
        const PreparedQuery pq = prepare(inst.g, inst.x, inst.y);
        const VertexSet& d = pq.districts.front();
        const CostMap costs = pq.project(inst.costs);
        const auto opt = oracle::min_hitting_cost(pq.g, oracle::to_mask(d), costs);
        REQUIRE(opt.has_value());
        const SubmodularObjective obj(pq.g, d, costs);
        const auto best = obj.maximizers();
        REQUIRE_FALSE(best.empty());
        for (const auto& i : best) {
            CHECK(obj.f(i) == 0);
            CHECK(costs.total(i) == *opt);
        }
    }
}

TEST_CASE("hedge environment enforces legal actions") {
    const GraphFile f = fixtures::two_hedge();
    const Admg& g = f.graph;
    HedgeEnvironment env(g, {g.at("S")}, f.costs);
    CHECK(env.reset().hull == g.all());
    CHECK(env.legal_actions() == make_set({g.at("X1"), g.at("X2"), g.at("X3")}));
    CHECK_THROWS_AS(env.step(g.at("S")), ActionError);
    CHECK_THROWS_AS(env.step(17), ActionError);
    CHECK(env.hull_size_after(g.at("X2")) == 3);
    const StepResult r = env.step(g.at("X1"));
    CHECK(r.reward == -1);
    CHECK(r.terminal);
    CHECK(r.state.hull == VertexSet{g.at("S")});
    CHECK_THROWS_AS(env.step(g.at("X3")), ActionError);

    GraphFile inf = fixtures::two_hedge();
    inf.costs.set(g.at("X2"), kInfiniteCost);
    HedgeEnvironment env2(g, {g.at("S")}, inf.costs);
    CHECK_THROWS_AS(env2.step(g.at("X2")), ActionError);
    CHECK_THROWS_AS(HedgeEnvironment(g, {g.at("S"), g.at("X2")}, f.costs), InputError);
}

TEST_CASE("environment state depends only on the removed set") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const auto inst = fixtures::random_instance(seed, 9, 0.35, 0.45);
        const PreparedQuery pq = prepare(inst.g, inst.x, inst.y);
        const VertexSet& d = pq.districts.front();
        const CostMap costs = pq.project(inst.costs);
        const oracle::Mask dm = oracle::to_mask(d);
        const auto hs = oracle::hedges(pq.g, dm);
        HedgeEnvironment env(pq.g, d, costs);
        const VertexSet first = env.legal_actions();
        if (first.size() < 2) continue;
        const Vertex a = first.front();
        const Vertex b = first.back();
        HedgeEnvironment forward(pq.g, d, costs);
        HedgeEnvironment backward(pq.g, d, costs);
        forward.step(a);
        CHECK(oracle::to_mask(forward.state().hull) == oracle_hull_after(hs, dm, oracle::bit(a)));
        const bool b_ok = !forward.terminal() && contains(forward.legal_actions(), b);
        backward.step(b);
        const bool a_ok = !backward.terminal() && contains(backward.legal_actions(), a);
        if (!a_ok || !b_ok) continue;
        forward.step(b);
        backward.step(a);
        CHECK(forward.state() == backward.state());
        CHECK(oracle::to_mask(forward.state().hull) == oracle_hull_after(hs, dm, oracle::bit(a) | oracle::bit(b)));
    }
}

TEST_CASE("rollouts end feasible with rewards summing to the negated cost") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const auto inst = fixtures::random_instance(seed, 10, 0.3, 0.5);
        const PreparedQuery pq = prepare(inst.g, inst.x, inst.y);
        const VertexSet& d = pq.districts.front();
        const CostMap costs = pq.project(inst.costs);
        const auto hs = oracle::hedges(pq.g, oracle::to_mask(d));
        for (Policy p : {Policy::kGreedyCost, Policy::kGreedyRatio, Policy::kRandom}) {
            const RolloutResult r = rollout(pq.g, d, costs, p, seed);
            const VertexSet& removed = r.report.solution.sets.front();
            CHECK(oracle::hits_all(hs, oracle::to_mask(removed)));
            CHECK(r.total_reward == -r.report.cost);
            Cost sum = 0;
            for (const auto& s : r.steps) sum += s.reward;
            CHECK(sum == r.total_reward);
            CHECK(r.steps.size() == removed.size());
        }
    }
    CHECK(parse_policy("greedy_ratio") == Policy::kGreedyRatio);
    CHECK_THROWS_AS(parse_policy("optimal"), ConfigError);
}

TEST_CASE("trajectory lines list hull size, action and reward") {
    const GraphFile f = fixtures::two_hedge();
    const RolloutResult r = rollout(f.graph, {f.graph.at("S")}, f.costs, Policy::kGreedyCost);
    std::ostringstream out;
    write_trajectory(out, f.graph, r.steps);
    CHECK(out.str() == "4 X1 -1\n");
}
