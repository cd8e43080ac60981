#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "mcid/hedge.hpp"
#include "oracles.hpp"

using namespace mcid;

namespace {

std::vector<oracle::Mask> masks(const std::vector<VertexSet>& sets) {
    std::vector<oracle::Mask> out;
    for (const auto& s : sets) out.push_back(oracle::to_mask(s));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("two_hedge hedges and hull") {
    const GraphFile f = fixtures::two_hedge();
    const Admg& g = f.graph;
    const VertexSet s{g.at("S")};
    const auto hs = enumerate_hedges(g, s);
    REQUIRE(hs.size() == 2);
    CHECK(hs[0] == make_set({g.at("S"), g.at("X1"), g.at("X3")}));
    CHECK(hs[1] == g.all());
    CHECK(hedge_hull(g, s) == g.all());
    CHECK(is_hedge(g, s, hs[0]));
    CHECK_FALSE(is_hedge(g, s, make_set({g.at("S"), g.at("X1")})));
    CHECK(hits_all_hedges(g, s, {g.at("X1")}));
    CHECK(hits_all_hedges(g, s, {g.at("X3")}));
    CHECK_FALSE(hits_all_hedges(g, s, {g.at("X2")}));
}

TEST_CASE("a district without bidirected neighbours has no hedge") {
    const Admg g({"a", "b", "c"}, {{0, 1}, {1, 2}}, {});
    CHECK(hedge_hull(g, {2}) == VertexSet{2});
    CHECK(enumerate_hedges(g, {2}).empty());
    CHECK_FALSE(find_minimal_hedge(g, {2}, {}).has_value());
}

TEST_CASE("hull, hedges and hitting agree with the oracle") {
    std::size_t with_hedges = 0;
    for (std::uint64_t seed = 1; seed <= 150; ++seed) {
        const auto inst = fixtures::random_instance(seed, 9, 0.35, 0.4);
        const PreparedQuery pq = prepare(inst.g, inst.x, inst.y);
        for (const auto& d : pq.districts) {
            const oracle::Mask dm = oracle::to_mask(d);
            const auto expected = oracle::hedges(pq.g, dm);
            with_hedges += !expected.empty();
            CHECK(masks(enumerate_hedges(pq.g, d)) == [&] {
                auto e = expected;
                std::sort(e.begin(), e.end());
                return e;
            }());
            CHECK(oracle::to_mask(hedge_hull(pq.g, d)) == oracle::hull(pq.g, dm));
            const VertexSet rest = set_difference(pq.g.all(), d);
            for (std::size_t k = 0; k < rest.size(); ++k) {
                const VertexSet i = {rest[k], rest[(k * 3 + 1) % rest.size()]};
                const VertexSet is = make_set(i);
                CHECK(hits_all_hedges(pq.g, d, is) == oracle::hits_all(expected, oracle::to_mask(is)));
            }
        }
    }
    CHECK(with_hedges > 50);
}

TEST_CASE("hull is the union of all hedges") {
    for (std::uint64_t seed = 200; seed < 260; ++seed) {
        const auto inst = fixtures::random_instance(seed, 10, 0.3, 0.5);
        const PreparedQuery pq = prepare(inst.g, inst.x, inst.y);
        const VertexSet& d = pq.districts.front();
        VertexSet uni = d;
        for (const auto& h : enumerate_hedges(pq.g, d)) uni = set_union(uni, h);
        CHECK(uni == hedge_hull(pq.g, d));
    }
}

TEST_CASE("hull after removal matches the oracle on the remaining graph") {
    for (std::uint64_t seed = 300; seed < 360; ++seed) {
        const auto inst = fixtures::random_instance(seed, 9, 0.3, 0.5);
        const PreparedQuery pq = prepare(inst.g, inst.x, inst.y);
        const VertexSet& d = pq.districts.front();
        const VertexSet outside = set_difference(pq.g.all(), d);
        if (outside.empty()) continue;
        const VertexSet removed{outside[seed % outside.size()]};
        std::vector<Vertex> original;
        const Admg rest = induced(pq.g, set_difference(pq.g.all(), removed), &original);
        VertexSet ld;
        for (Vertex v : d)
            ld.push_back(static_cast<Vertex>(std::lower_bound(original.begin(), original.end(), v) - original.begin()));
        VertexSet expected;
        for (Vertex v : oracle::from_mask(oracle::hull(rest, oracle::to_mask(ld))))
            expected.push_back(original[static_cast<std::size_t>(v)]);
        CHECK(hedge_hull_without(pq.g, d, removed) == expected);
    }
}

TEST_CASE("find_minimal_hedge returns an inclusion-minimal hedge avoiding the forbidden set") {
    for (std::uint64_t seed = 1; seed <= 120; ++seed) {
        const auto inst = fixtures::random_instance(seed, 9, 0.35, 0.45);
        const PreparedQuery pq = prepare(inst.g, inst.x, inst.y);
        const CostMap costs = pq.project(inst.costs);
        const VertexSet& d = pq.districts.front();
        const oracle::Mask dm = oracle::to_mask(d);
        const auto all_hedges = oracle::hedges(pq.g, dm);
        const VertexSet outside = set_difference(pq.g.all(), d);
        const VertexSet forbidden = outside.empty() ? VertexSet{} : VertexSet{outside[seed % outside.size()]};
        const oracle::Mask fm = oracle::to_mask(forbidden);
        const auto found = find_minimal_hedge(pq.g, d, forbidden, costs);
        const bool any = std::any_of(all_hedges.begin(), all_hedges.end(), [&](oracle::Mask w) { return (w & fm) == 0; });
        CHECK(found.has_value() == any);
        if (!found) continue;
        const oracle::Mask w = oracle::to_mask(*found);
        CHECK(oracle::is_hedge(pq.g, dm, w));
        CHECK((w & fm) == 0);
        for (oracle::Mask other : all_hedges) CHECK_FALSE(((other & w) == other && other != w));
    }
}

TEST_CASE("enumeration guards") {
    const auto inst = fixtures::random_instance(5, 12, 0.3, 0.9);
    const PreparedQuery pq = prepare(inst.g, inst.x, inst.y);
    const auto all = enumerate_hedges(pq.g, pq.districts.front());
    if (all.size() > 1) CHECK_THROWS_AS(enumerate_hedges(pq.g, pq.districts.front(), 1), ResourceError);
    CHECK_THROWS_AS(hedge_hull(pq.g, {}), InputError);
}

TEST_CASE("prepare computes S and its districts") {
    const GraphFile f = fixtures::drug();
    const PreparedQuery pq = prepare(f.graph, f.x, f.y);
    VertexSet s;
    for (Vertex v : pq.to_original(pq.s)) s.push_back(v);
    CHECK(s == make_set({f.graph.at("X2"), f.graph.at("W"), f.graph.at("Y")}));
    CHECK(pq.districts.size() == 3);
    for (const auto& d : pq.districts) CHECK(is_district(pq.g, d));
}

TEST_CASE("identifiability agrees with the oracle") {
    std::size_t yes = 0;
    std::size_t no = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const auto inst = fixtures::random_instance(seed, 8, 0.3, 0.4, seed % 2 ? 1 : 2, 1);
        const PreparedQuery pq = prepare(inst.g, inst.x, inst.y);
        const CostMap costs = pq.project(inst.costs);
        const VertexSet rest = set_difference(pq.g.all(), pq.s);
        for (std::uint32_t pick = 0; pick < 8; ++pick) {
            std::vector<VertexSet> sets;
            std::vector<oracle::Mask> ms;
            for (int m = 0; m < 2; ++m) {
                VertexSet i;
                for (std::size_t k = 0; k < rest.size(); ++k)
                    if (((seed + pick * 5 + static_cast<std::uint32_t>(m) * 3 + k) % 3) == 0) i.push_back(rest[k]);
                ms.push_back(oracle::to_mask(i));
                sets.push_back(std::move(i));
            }
            const bool got = is_identifiable(pq, InterventionFamily::of(sets, costs));
            CHECK(got == oracle::identifies(pq.g, oracle::to_mask(pq.s), ms));
            (got ? yes : no) += 1;
        }
    }
    CHECK(yes > 0);
    CHECK(no > 0);
}
