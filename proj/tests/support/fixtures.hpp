#pragma once

#include <string>

#include "mcid/bench.hpp"
#include "mcid/graph_io.hpp"

namespace fixtures {

inline mcid::GraphFile g1() {
    return mcid::parse_graph_string(
        "nodes: a b s\n"
        "a -> s\nb -> a\na <-> s\nb <-> s\n"
        "X: a\nY: s\n");
}

// S with X3 -> S, X2 -> S, X1 -> X3 and X1 bidirected to S, X2 and X3.
inline mcid::GraphFile two_hedge(mcid::Cost c1 = 1, mcid::Cost c2 = 3, mcid::Cost c3 = 2) {
    return mcid::parse_graph_string(
        "nodes: S X1 X2 X3\n"
        "cost X1 " + std::to_string(c1) + "\ncost X2 " + std::to_string(c2) + "\ncost X3 " + std::to_string(c3) +
        "\nX1 -> X3\nX3 -> S\nX2 -> S\n"
        "X1 <-> X3\nX1 <-> S\nX1 <-> X2\n"
        "X: X2 X3\nY: S\n");
}

inline mcid::GraphFile drug() {
    return mcid::parse_graph_string(
        "nodes: X1 X2 X3 W Y\n"
        "cost X1 2\ncost X2 1\ncost X3 5\ncost W 4\n"
        "X1 -> X3\nX3 -> W\nX2 -> Y\nW -> Y\n"
        "X1 <-> X3\nX1 <-> W\nX1 <-> X2\n"
        "X: X1 X3\nY: Y\n");
}

inline mcid::GeneratedInstance random_instance(std::uint64_t seed, int n, double p_dir, double p_bid,
                                               int districts = 1, int target_size = 0) {
    mcid::GenConfig cfg;
    cfg.n = n;
    cfg.p_dir = p_dir;
    cfg.p_bid = p_bid;
    cfg.seed = seed;
    cfg.target_size = target_size;
    cfg.districts = districts;
    cfg.query_model = districts == 1 ? mcid::QueryModel::kSingleDistrictTarget : mcid::QueryModel::kDistricts;
    return mcid::gen_admg(cfg);
}

}  // namespace fixtures
