#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mcid/admg.hpp"
#include "mcid/solvers.hpp"

namespace mcid {

enum class CostModel { kUnit, kUniform, kPoisson };
enum class QueryModel { kSingleDistrictTarget, kRandomXY, kDistricts };

struct GenConfig {
    int n = 10;
    double p_dir = 0.3;
    double p_bid = 0.3;
    CostModel cost_model = CostModel::kUniform;  // uniform on 1..n
    double poisson_lambda = 10.0;
    std::uint64_t seed = 1;
    QueryModel query_model = QueryModel::kSingleDistrictTarget;
    int target_size = 0;  // vertices per target district; 0 draws 1..max(1, n/4)
    int districts = 1;    // kDistricts only
    int max_retries = 200;
};

struct GeneratedInstance {
    Admg g;
    CostMap costs;
    VertexSet x;
    VertexSet y;
    int attempts = 1;
};

/// Erdős–Rényi ADMG: a random topological order, each forward pair directed with p_dir and
/// each unordered pair bidirected with p_bid. Target-district queries grow bidirected-
/// connected targets T_1..T_r with no bidirected edge between them and set Y = ∪T, X = Pa(Y)
/// (a random outside vertex when Y has no parents), so S = Y has exactly r districts.
/// Draws that cannot satisfy the query model are retried with a derived seed; after
/// max_retries a ResourceError is raised.
GeneratedInstance gen_admg(const GenConfig& cfg);

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t instance_seed(std::uint64_t base, std::size_t point, std::size_t instance);

enum class Pairing { kGrid, kPaired };

struct SweepSpec {
    std::vector<int> n{10};
    std::size_t graphs = 10;
    std::vector<double> p_dir{0.3};
    std::vector<double> p_bid{0.3};
    Pairing pairing = Pairing::kGrid;
    std::vector<int> districts{1};
    std::vector<Method> methods{Method::kMhs, Method::kAdjustHeuristic, Method::kH1};
    std::optional<Method> oracle = Method::kMhs;
    CostModel cost_model = CostModel::kUniform;
    double poisson_lambda = 10.0;
    QueryModel query_model = QueryModel::kSingleDistrictTarget;
    int target_size = 0;
    std::uint64_t seed = 1;
    int threads = 0;  // 0: OpenMP default, 1: serial loop
    std::int64_t timeout_ms = 60'000;
    SoftForm soft_form = SoftForm::kPerSlotUnit;
    std::string maxsat_command;
    std::string ilp_command;

    /// Flat "key = value" lines; '#' starts a comment. Lists are comma separated; numeric
    /// lists also accept "start:stop:step".
    static SweepSpec parse(std::istream& in);
    static SweepSpec parse_string(const std::string& text);
    [[nodiscard]] std::vector<std::pair<std::string, std::string>> echo() const;
};

struct SweepPoint {
    int n = 0;
    double p_dir = 0;
    double p_bid = 0;
    int districts = 1;
};

std::vector<SweepPoint> sweep_points(const SweepSpec& spec);

struct BenchRecord {
    std::size_t point = 0;
    std::size_t instance = 0;
    SweepPoint config;
    std::string method;
    std::string status;  // optimal, heuristic, timeout, infeasible, resource, config, error, generation
    std::optional<Cost> cost;
    std::optional<Cost> optimal_cost;
    std::optional<double> normalized_cost;
    double wall_time_ms = 0;
    std::size_t nodes = 0;
    std::size_t hedges = 0;
};

struct AggregateRecord {
    std::size_t point = 0;
    SweepPoint config;
    std::string method;
    std::size_t solved = 0;
    std::size_t total = 0;
    std::optional<double> mean_cost;
    std::optional<double> mean_normalized;
    std::optional<double> ci99_halfwidth;  // of the normalized cost
    double mean_wall_time_ms = 0;
};

struct ExperimentResult {
    std::vector<BenchRecord> records;  // ordered by (point, instance, method)
    std::vector<AggregateRecord> aggregates;
};

/// Normal-approximation 99% half-width of the mean.
std::optional<double> ci99_halfwidth(const std::vector<double>& values);

/// Runs every (point, instance, method). Instances run in parallel unless spec.threads == 1.
ExperimentResult run_experiment(const SweepSpec& spec);

/// CSV with '#' metadata lines, a fixed header, instance rows, then aggregate rows.
void write_csv(std::ostream& out, const SweepSpec& spec, const ExperimentResult& result);

}  // namespace mcid
