// Times the OpenMP kernels against their serial references and checks they agree.
#include <chrono>
#include <cstdio>
#include <sstream>
#include <string>

#include <omp.h>

#include "mcid/bench.hpp"
#include "mcid/solvers.hpp"

namespace {

using Clock = std::chrono::steady_clock;

template <class F>
double time_ms(F&& f) {
    const auto start = Clock::now();
    f();
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string strip_wall_time(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    std::string out;
    while (std::getline(in, line)) {
        std::string row;
        std::istringstream fields(line);
        std::string field;
        for (int k = 0; std::getline(fields, field, ','); ++k)
            if (k != 13) row += field + ',';
        out += row + '\n';
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    const int n = argc > 1 ? std::stoi(argv[1]) : 22;
    const std::size_t graphs = argc > 2 ? std::stoul(argv[2]) : 24;
    std::printf("threads available: %d\n", omp_get_max_threads());
    int failures = 0;

    // Brute force over the hedge hull: pick a draw whose hull has many outside vertices.
    mcid::GenConfig cfg;
    cfg.n = n;
    cfg.p_dir = 0.3;
    cfg.p_bid = 0.5;
    cfg.target_size = 1;
    for (std::uint64_t seed = 1; seed < 200; ++seed) {
        cfg.seed = seed;
        const auto inst = mcid::gen_admg(cfg);
        const auto pq = mcid::prepare(inst.g, inst.x, inst.y);
        if (pq.districts.size() != 1) continue;
        const auto hull = mcid::hedge_hull(pq.g, pq.districts.front());
        const std::size_t free = hull.size() - pq.districts.front().size();
        if (free < 14 || free > mcid::kBruteForceSingleGuard) continue;
        const auto costs = pq.project(inst.costs);
        mcid::SolveReport serial;
        mcid::SolveReport parallel;
        const double ts = time_ms([&] { serial = mcid::brute_force_single(pq.g, pq.districts.front(), costs); });
        const double tp = time_ms([&] { parallel = mcid::brute_force_single_parallel(pq.g, pq.districts.front(), costs); });
        const bool same = serial.cost == parallel.cost && serial.solution.sets == parallel.solution.sets;
        failures += !same;
        std::printf("brute_force_single  seed=%llu free=%zu serial=%.1fms parallel=%.1fms speedup=%.2f %s\n",
                    static_cast<unsigned long long>(seed), free, ts, tp, ts / tp, same ? "match" : "MISMATCH");
        break;
    }

    mcid::SweepSpec spec = mcid::SweepSpec::parse_string(
        "n = 12,16\ngraphs = " + std::to_string(graphs) + "\np_dir = 0.3\np_bid = 0.4\nmethods = mhs,adjust,h1\n");
    std::string csv_serial;
    std::string csv_parallel;
    const double ts = time_ms([&] {
        spec.threads = 1;
        std::ostringstream os;
        mcid::write_csv(os, spec, mcid::run_experiment(spec));
        csv_serial = os.str();
    });
    const double tp = time_ms([&] {
        spec.threads = 0;
        std::ostringstream os;
        mcid::write_csv(os, spec, mcid::run_experiment(spec));
        csv_parallel = os.str();
    });
    // The threads line of the preamble is not echoed, so only wall time may differ.
    const bool same = strip_wall_time(csv_serial) == strip_wall_time(csv_parallel);
    failures += !same;
    std::printf("run_experiment      instances=%zu serial=%.1fms parallel=%.1fms speedup=%.2f %s\n", 2 * graphs, ts,
                tp, ts / tp, same ? "match" : "MISMATCH");
    return failures == 0 ? 0 : 1;
}
