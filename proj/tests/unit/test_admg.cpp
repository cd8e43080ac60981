#include <doctest.h>

#include <sstream>

#include "fixtures.hpp"
#include "mcid/admg.hpp"
#include "mcid/graph_io.hpp"
#include "oracles.hpp"

using namespace mcid;

TEST_CASE("set helpers keep sorted unique vectors") {
    CHECK(make_set({3, 1, 3, 2}) == VertexSet{1, 2, 3});
    CHECK(set_union({1, 3}, {2, 3}) == VertexSet{1, 2, 3});
    CHECK(set_intersection({1, 2, 3}, {2, 4}) == VertexSet{2});
    CHECK(set_difference({1, 2, 3}, {2}) == VertexSet{1, 3});
    CHECK(is_subset({1, 3}, {1, 2, 3}));
    CHECK_FALSE(is_subset({1, 4}, {1, 2, 3}));
    CHECK(disjoint({1, 2}, {3}));
    CHECK(from_mask(to_mask(5, {0, 4})) == VertexSet{0, 4});
}

TEST_CASE("cost map saturates at infinity") {
    CostMap c(std::vector<Cost>{2, kInfiniteCost, 5});
    CHECK(c.total({0, 2}) == 7);
    CHECK(c.total({0, 1}) == kInfiniteCost);
    CHECK(c.finite_total() == 7);
    CHECK(saturating_add(kInfiniteCost - 1, 5) == kInfiniteCost);
    CHECK(c.project({2, 0}).values() == std::vector<Cost>{5, 2});
    CHECK_THROWS_AS(c.set(0, -1), InputError);
}

TEST_CASE("admg construction validates its input") {
    CHECK_THROWS_AS(Admg({"a", "b"}, {{0, 1}, {1, 0}}, {}), InputError);
    CHECK_THROWS_AS(Admg({"a", "b"}, {{0, 0}}, {}), InputError);
    CHECK_THROWS_AS(Admg({"a", "a"}, {}, {}), InputError);
    CHECK_THROWS_AS(Admg({"a", "b"}, {{0, 2}}, {}), InputError);
    CHECK_THROWS_AS(Admg({"a", "b"}, {}, {{0, 1}, {1, 0}}), InputError);
    const Admg g({"a", "b", "c"}, {{0, 1}}, {{2, 1}});
    CHECK(g.has_bidirected(1, 2));
    CHECK(g.bidirected_edges().front() == VertexPair{1, 2});
    CHECK(g.at("c") == 2);
    CHECK_THROWS_AS((void)g.at("zz"), InputError);
}

TEST_CASE("graph file parsing reports the offending line") {
    const auto bad = [](const std::string& text, const std::string& needle) {
        try {
            parse_graph_string(text);
            FAIL("expected an input error");
        } catch (const InputError& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    bad("nodes: a b\na -> c\n", "line 2");
    bad("nodes: a b\na -> b\nb -> a\n", "line 3");
    bad("nodes: a b\ncost a -3\n", "line 2");
    bad("nodes: a a\n", "line 1");
    bad("nodes: a b\na => b\n", "line 2");
    bad("nodes: a\nfoo: a\n", "line 2");
}

TEST_CASE("graph file costs accept inf and scaled decimals") {
    const GraphFile f = parse_graph_string("nodes: a b c\ncost a inf\ncost b 2.5\n", ParseOptions{10});
    CHECK(f.costs.is_infinite(0));
    CHECK(f.costs[1] == 25);
    CHECK(f.costs[2] == 1);
    CHECK_FALSE(f.has_query());
}

TEST_CASE("graph file round trip") {
    const GraphFile f = fixtures::drug();
    std::ostringstream out;
    write_graph(out, f);
    const GraphFile back = parse_graph_string(out.str());
    CHECK(back.graph == f.graph);
    CHECK(back.costs.values() == f.costs.values());
    CHECK(back.x == f.x);
    CHECK(back.y == f.y);
}

TEST_CASE("ancestors and districts agree with the bitmask oracle") {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        const auto inst = fixtures::random_instance(seed, 10, 0.3, 0.3);
        const Admg& g = inst.g;
        const oracle::Mask all = oracle::bit(g.size()) - 1;
        for (Vertex v = 0; v < g.size(); ++v)
            CHECK(oracle::to_mask(ancestors(g, {v})) == oracle::ancestors(g, all, oracle::bit(v)));
        const VertexSet w = inst.y;
        const VertexSet sub = set_difference(g.all(), inst.x);
        CHECK(oracle::to_mask(ancestors_within(g, sub, w)) == oracle::ancestors(g, oracle::to_mask(sub), oracle::to_mask(w)));
        std::vector<oracle::Mask> got;
        for (const auto& d : districts_of(g, sub)) got.push_back(oracle::to_mask(d));
        auto expected = oracle::districts(g, oracle::to_mask(sub));
        std::sort(got.begin(), got.end());
        std::sort(expected.begin(), expected.end());
        CHECK(got == expected);
    }
}

TEST_CASE("topological order puts every edge forward") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto inst = fixtures::random_instance(seed, 12, 0.4, 0.2);
        const auto order = topological_order(inst.g);
        std::vector<int> pos(order.size());
        for (std::size_t k = 0; k < order.size(); ++k) pos[static_cast<std::size_t>(order[k])] = static_cast<int>(k);
        for (auto [a, b] : inst.g.directed_edges()) CHECK(pos[static_cast<std::size_t>(a)] < pos[static_cast<std::size_t>(b)]);
    }
}

TEST_CASE("induced subgraph renumbers and keeps edges inside") {
    const GraphFile f = fixtures::two_hedge();
    std::vector<Vertex> original;
    const Admg h = induced(f.graph, {0, 1, 3}, &original);
    CHECK(original == std::vector<Vertex>{0, 1, 3});
    CHECK(h.size() == 3);
    CHECK(h.label(2) == "X3");
    CHECK(h.has_directed(1, 2));
    CHECK(h.has_directed(2, 0));
    CHECK(h.has_bidirected(0, 1));
    CHECK(h.directed_edges().size() == 2);
}

TEST_CASE("latent projection adds one latent per bidirected edge") {
    const GraphFile f = fixtures::g1();
    const Admg d = latent_project(f.graph);
    CHECK(d.size() == 5);
    CHECK(d.bidirected_edges().empty());
    CHECK(d.is_latent(3));
    CHECK(d.is_latent(4));
    CHECK(d.label(3).rfind(kLatentPrefix, 0) == 0);
    CHECK(d.children_of(3).size() == 2);
}

TEST_CASE("remove_incoming drops bidirected edges at the target") {
    const GraphFile f = fixtures::g1();
    const Admg cut = remove_incoming(f.graph, {f.graph.at("a")});
    CHECK_FALSE(cut.has_directed(f.graph.at("b"), f.graph.at("a")));
    CHECK_FALSE(cut.has_bidirected(f.graph.at("a"), f.graph.at("s")));
    CHECK(cut.has_bidirected(f.graph.at("b"), f.graph.at("s")));
    const Admg out = remove_outgoing(f.graph, {f.graph.at("a")});
    CHECK_FALSE(out.has_directed(f.graph.at("a"), f.graph.at("s")));
    CHECK(out.has_bidirected(f.graph.at("a"), f.graph.at("s")));
}

TEST_CASE("d-separation agrees with the canonical-DAG oracle") {
    std::size_t checked = 0;
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const auto inst = fixtures::random_instance(seed, 8, 0.35, 0.25);
        const Admg& g = inst.g;
        for (Vertex a = 0; a < g.size(); ++a)
            for (Vertex b = a + 1; b < g.size(); ++b) {
                VertexSet z;
                for (Vertex v = 0; v < g.size(); ++v)
                    if (v != a && v != b && (v * 7 + a + b + static_cast<int>(seed)) % 3 == 0) z.push_back(v);
                CHECK(d_separated(g, {a}, {b}, z) ==
                      oracle::m_separated(g, oracle::bit(a), oracle::bit(b), oracle::to_mask(z)));
                ++checked;
            }
    }
    CHECK(checked > 1000);
}

TEST_CASE("moral graph marries co-parents including latents") {
    // a -> c <- b and c <-> d: the latent for c<->d marries with a and b through c.
    const Admg g({"a", "b", "c", "d"}, {{0, 2}, {1, 2}}, {{2, 3}});
    const UndirectedGraph m = moralize(g);
    CHECK(m.size() == 5);
    CHECK(m.adjacent(0, 1));
    CHECK(m.adjacent(0, 4));
    CHECK(m.adjacent(1, 4));
    CHECK_FALSE(m.adjacent(0, 3));
}
