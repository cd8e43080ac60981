#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "fixtures.hpp"
#include "mcid/bench.hpp"
#include "mcid/cli.hpp"
#include "oracles.hpp"

using namespace mcid;
using nlohmann::json;

namespace {

struct CliRun {
    int code = 0;
    std::string out;
    std::string err;
};

CliRun cli(std::vector<std::string> args) {
    args.insert(args.begin(), "mcid");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(MCID_TEST_DATA_DIR) + "/" + name; }

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("mcid_test_" + name)).string();
}

// CSV with the wall-time column blanked.
std::string strip_wall_time(const std::string& csv) {
    std::istringstream in(csv);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            out << line << '\n';
            continue;
        }
        std::vector<std::string> cols;
        std::stringstream ls(line);
        std::string c;
        while (std::getline(ls, c, ',')) cols.push_back(c);
        if (cols.size() > 13 && cols[0] != "row_type") cols[13].clear();
        for (std::size_t k = 0; k < cols.size(); ++k) out << (k ? "," : "") << cols[k];
        out << '\n';
    }
    return out.str();
}

}  // namespace

TEST_CASE("generator is deterministic per seed") {
    GenConfig cfg;
    cfg.n = 15;
    cfg.seed = 42;
    const auto a = gen_admg(cfg);
    const auto b = gen_admg(cfg);
    CHECK(a.g == b.g);
    CHECK(a.costs.values() == b.costs.values());
    CHECK(a.x == b.x);
    CHECK(a.y == b.y);
    cfg.seed = 43;
    const auto c = gen_admg(cfg);
    CHECK_FALSE((c.g == a.g && c.y == a.y));
    CHECK(splitmix64(1) != splitmix64(2));
    CHECK(instance_seed(1, 0, 1) != instance_seed(1, 1, 0));
}

TEST_CASE("generator edge probabilities at the extremes") {
    GenConfig cfg;
    cfg.n = 12;
    cfg.p_dir = 0;
    cfg.p_bid = 0;
    cfg.query_model = QueryModel::kRandomXY;
    const auto empty = gen_admg(cfg);
    CHECK(empty.g.directed_edges().empty());
    CHECK(empty.g.bidirected_edges().empty());
    cfg.p_bid = 1;
    cfg.p_dir = 1;
    const auto full = gen_admg(cfg);
    CHECK(full.g.bidirected_edges().size() == 66);
    CHECK(full.g.directed_edges().size() == 66);
    CHECK(topological_order(full.g).size() == 12);
}

TEST_CASE("generator cost models") {
    GenConfig cfg;
    cfg.n = 30;
    const auto draw = [&](CostModel m) {
        cfg.cost_model = m;
        return gen_admg(cfg).costs.values();
    };
    for (Cost c : draw(CostModel::kUnit)) CHECK(c == 1);
    for (Cost c : draw(CostModel::kUniform)) CHECK((c >= 1 && c <= 30));
    cfg.poisson_lambda = 4;
    for (Cost c : draw(CostModel::kPoisson)) CHECK(c >= 0);
}

TEST_CASE("target-district queries produce the requested district count") {
    for (int r = 1; r <= 3; ++r)
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            GenConfig cfg;
            cfg.n = 14;
            cfg.p_dir = 0.3;
            cfg.p_bid = 0.4;
            cfg.seed = seed;
            cfg.query_model = r == 1 ? QueryModel::kSingleDistrictTarget : QueryModel::kDistricts;
            cfg.districts = r;
            const auto inst = gen_admg(cfg);
            const PreparedQuery pq = prepare(inst.g, inst.x, inst.y);
            CHECK(pq.districts.size() == static_cast<std::size_t>(r));
            CHECK(oracle::to_mask(pq.to_original(pq.s)) == oracle::to_mask(inst.y));
            CHECK(disjoint(inst.x, inst.y));
            CHECK_FALSE(inst.x.empty());
        }
}

TEST_CASE("random XY queries and invalid configurations") {
    GenConfig cfg;
    cfg.n = 10;
    cfg.query_model = QueryModel::kRandomXY;
    const auto inst = gen_admg(cfg);
    CHECK(inst.y.size() == 1);
    CHECK((inst.x.size() >= 1 && inst.x.size() <= 3));
    CHECK(disjoint(inst.x, inst.y));

    GenConfig bad;
    bad.n = 1;
    CHECK_THROWS_AS(gen_admg(bad), ConfigError);
    bad.n = 10;
    bad.p_dir = 1.5;
    CHECK_THROWS_AS(gen_admg(bad), ConfigError);
    GenConfig impossible;
    impossible.n = 2;
    impossible.query_model = QueryModel::kDistricts;
    impossible.districts = 3;
    impossible.max_retries = 5;
    CHECK_THROWS_AS(gen_admg(impossible), ResourceError);
}

TEST_CASE("sweep files parse lists and ranges") {
    const SweepSpec s = SweepSpec::parse_string(
        "# comment\n"
        "n = 10:30:10\n"
        "graphs = 4\n"
        "p_dir = 0.1, 0.5\n"
        "p_bid = 0.2, 0.6\n"
        "pairing = paired\n"
        "districts = 1,2\n"
        "methods = sat, adjust, h1\n"
        "oracle = none\n"
        "cost_model = poisson\n"
        "seed = 9\n");
    CHECK(s.n == std::vector<int>{10, 20, 30});
    CHECK(s.graphs == 4);
    CHECK(s.pairing == Pairing::kPaired);
    CHECK_FALSE(s.oracle.has_value());
    CHECK(s.methods.size() == 3);
    CHECK(s.cost_model == CostModel::kPoisson);
    const auto pts = sweep_points(s);
    CHECK(pts.size() == 3 * 2 * 2);
    CHECK(pts[1].p_dir == doctest::Approx(0.1));
    CHECK(pts[1].p_bid == doctest::Approx(0.2));
    const SweepSpec grid = SweepSpec::parse_string("p_dir = 0.1,0.2\np_bid = 0.3,0.4,0.5\n");
    CHECK(sweep_points(grid).size() == 6);
    CHECK_THROWS_AS(SweepSpec::parse_string("colour = blue\n"), ConfigError);
    CHECK_THROWS_AS(SweepSpec::parse_string("n = ten\n"), ConfigError);
    CHECK_THROWS_AS(SweepSpec::parse_string("methods = gurobi\n"), ConfigError);
    CHECK_THROWS_AS(SweepSpec::parse_string("pairing = paired\np_dir = 0.1\np_bid = 0.1,0.2\n"), ConfigError);
}

TEST_CASE("serial and parallel sweeps write identical rows") {
    SweepSpec spec = SweepSpec::parse_string(
        "n = 8, 10\ngraphs = 4\np_dir = 0.3\np_bid = 0.4\nmethods = brute, mhs, sat, adjust, h1\n"
        "oracle = brute\nseed = 3\n");
    spec.threads = 1;
    const ExperimentResult serial = run_experiment(spec);
    spec.threads = 0;
    const ExperimentResult parallel = run_experiment(spec);
    std::ostringstream a;
    std::ostringstream b;
    write_csv(a, spec, serial);
    write_csv(b, spec, parallel);
    CHECK(strip_wall_time(a.str()) == strip_wall_time(b.str()));
    REQUIRE(serial.records.size() == 2 * 4 * 5);
    for (const auto& r : serial.records) {
        REQUIRE(r.normalized_cost.has_value());
        if (r.method == "brute" || r.method == "mhs" || r.method == "sat") {
            CHECK(r.status == "optimal");
            CHECK(*r.normalized_cost == 1.0);
        } else {
            CHECK(r.status == "heuristic");
            CHECK(*r.normalized_cost >= 1.0);
        }
    }
    CHECK(serial.aggregates.size() == 2 * 5);
    CHECK(a.str().rfind("# mcid bench", 0) == 0);
    CHECK(a.str().find("row_type,point,instance,n,p_dir,p_bid,districts,method,status,cost,optimal_cost,"
                       "normalized_cost,ci99_halfwidth,wall_time_ms,nodes,hedges") != std::string::npos);
}

TEST_CASE("sweep records failures as rows") {
    SweepSpec spec = SweepSpec::parse_string(
        "n = 12\ngraphs = 3\np_dir = 0.3\np_bid = 0.6\nmethods = sat, h1\noracle = none\n"
        "maxsat_cmd = sleep 5\ntimeout_ms = 200\n");
    spec.threads = 1;
    const ExperimentResult r = run_experiment(spec);
    REQUIRE(r.records.size() == 6);
    for (std::size_t k = 0; k < r.records.size(); k += 2) {
        CHECK(r.records[k].status == "timeout");
        CHECK_FALSE(r.records[k].cost.has_value());
        CHECK(r.records[k + 1].status == "heuristic");
    }
    REQUIRE(r.aggregates.size() == 2);
    CHECK(r.aggregates[0].solved == 0);
    CHECK(r.aggregates[0].total == 3);
    CHECK_FALSE(r.aggregates[0].mean_cost.has_value());

    SweepSpec big = SweepSpec::parse_string("n = 60\ngraphs = 1\np_dir = 0.2\np_bid = 0.8\nmethods = brute\noracle = none\n");
    big.threads = 1;
    CHECK(run_experiment(big).records.front().status == "resource");
}

TEST_CASE("ci99 half-width") {
    CHECK_FALSE(ci99_halfwidth({1.0}).has_value());
    const double sd = std::sqrt(((1 - 2.0) * (1 - 2.0) + 0 + 1) / 2.0);
    CHECK(*ci99_halfwidth({1.0, 2.0, 3.0}) == doctest::Approx(2.576 * sd / std::sqrt(3.0)));
    CHECK(*ci99_halfwidth({2.0, 2.0}) == 0.0);
}

TEST_CASE("cli solve, identify and adjust") {
    const CliRun g1 = cli({"solve", data("g1.txt"), "--method", "brute"});
    REQUIRE(g1.code == kExitOk);
    const json j = json::parse(g1.out);
    CHECK(j["cost"] == 1);
    CHECK(j["family"] == json::array({json::array({"a"})}));

    for (const char* m : {"sat", "ilp", "mhs", "brute"}) {
        const CliRun r = cli({"solve", data("two_hedge.txt"), "--method", m});
        REQUIRE(r.code == kExitOk);
        CHECK(json::parse(r.out)["family"] == json::array({json::array({"X1"})}));
    }

    const CliRun chain = cli({"identify", data("chain.txt")});
    REQUIRE(chain.code == kExitOk);
    CHECK(json::parse(chain.out)["identifiable"] == true);
    const CliRun fig = cli({"identify", data("two_hedge.txt"), "--family", "X2"});
    REQUIRE(fig.code == kExitOk);
    CHECK(json::parse(fig.out)["identifiable"] == false);
    CHECK(json::parse(cli({"identify", data("two_hedge.txt"), "--family", "X3"}).out)["identifiable"] == true);

    const CliRun adj = cli({"adjust", data("drug.txt")});
    REQUIRE(adj.code == kExitOk);
    const json a = json::parse(adj.out);
    CHECK(a["cost"] == 2);
    CHECK(a["status"] == "verified");
}

TEST_CASE("cli encode writes a wcnf header") {
    const std::string path = temp_path("two_hedge.wcnf");
    const CliRun r = cli({"encode", data("two_hedge.txt"), "--format", "wcnf", "-o", path});
    REQUIRE(r.code == kExitOk);
    const json j = json::parse(r.out);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    while (!line.empty() && line[0] == 'c') std::getline(in, line);
    CHECK(line == "p wcnf " + std::to_string(j["variables"].get<int>()) + " " +
                      std::to_string(j["hard_clauses"].get<int>() + j["soft_clauses"].get<int>()) + " " +
                      std::to_string(j["top"].get<long long>()));
    std::filesystem::remove(path);
}

TEST_CASE("cli exit codes") {
    CHECK(cli({"solve", data("missing.txt")}).code == kExitInput);
    CHECK(cli({"solve", data("g1.txt"), "--method", "gurobi"}).code == kExitConfig);
    CHECK(cli({"solve", data("g1.txt"), "--bogus"}).code == kExitInput);
    CHECK(cli({"--help"}).code == kExitOk);
    CHECK(cli({"solve", data("two_hedge.txt"), "--y", "nope"}).code == kExitInput);

    const std::string path = temp_path("allinf.txt");
    {
        std::ofstream out(path);
        out << "nodes: S X1 X2 X3\ncost X1 inf\ncost X2 inf\ncost X3 inf\n"
               "X1 -> X3\nX3 -> S\nX2 -> S\nX1 <-> X3\nX1 <-> S\nX1 <-> X2\nX: X2 X3\nY: S\n";
    }
    CHECK(cli({"solve", path, "--method", "sat"}).code == kExitInfeasible);
    std::filesystem::remove(path);

    const std::string traj = temp_path("traj.txt");
    const CliRun env = cli({"env", "rollout", data("two_hedge.txt"), "--policy", "greedy_cost", "--trajectory", traj});
    REQUIRE(env.code == kExitOk);
    std::ifstream tin(traj);
    std::string first;
    std::getline(tin, first);
    CHECK(first == "4 X1 -1");
    std::filesystem::remove(traj);
}

TEST_CASE("cli bench writes csv") {
    const std::string out = temp_path("smoke.csv");
    const CliRun r = cli({"bench", "--config", data("smoke.cfg"), "-o", out, "--threads", "1"});
    REQUIRE(r.code == kExitOk);
    std::ifstream in(out);
    std::string line;
    std::size_t rows = 0;
    while (std::getline(in, line))
        if (line.rfind("instance,", 0) == 0) ++rows;
    CHECK(rows == 2 * 5 * 4);
    std::filesystem::remove(out);
}
