#include "mcid/bench.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include <omp.h>

namespace mcid {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t instance_seed(std::uint64_t base, std::size_t point, std::size_t instance) {
    return splitmix64(splitmix64(base) ^ (static_cast<std::uint64_t>(point) << 32 | static_cast<std::uint64_t>(instance)));
}

namespace {

using Rng = std::mt19937_64;

void check_config(const GenConfig& cfg) {
    if (cfg.n < 2) throw ConfigError("gen_admg: n must be at least 2");
    if (!(cfg.p_dir >= 0 && cfg.p_dir <= 1) || !(cfg.p_bid >= 0 && cfg.p_bid <= 1))
        throw ConfigError("gen_admg: edge probabilities must lie in [0, 1]");
    if (cfg.cost_model == CostModel::kPoisson && !(cfg.poisson_lambda > 0))
        throw ConfigError("gen_admg: poisson mean must be positive");
    if (cfg.districts < 1) throw ConfigError("gen_admg: district count must be positive");
    if (cfg.target_size < 0) throw ConfigError("gen_admg: target size must be non-negative");
}

Admg random_graph(int n, double p_dir, double p_bid, Rng& rng) {
    std::vector<Vertex> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::bernoulli_distribution dir(p_dir);
    std::bernoulli_distribution bid(p_bid);
    std::vector<VertexPair> directed;
    std::vector<VertexPair> bidirected;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (dir(rng)) directed.emplace_back(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
    for (Vertex a = 0; a < n; ++a)
        for (Vertex b = a + 1; b < n; ++b)
            if (bid(rng)) bidirected.emplace_back(a, b);
    std::vector<std::string> labels;
    for (int v = 0; v < n; ++v) labels.push_back("v" + std::to_string(v));
    return Admg(std::move(labels), directed, bidirected);
}

CostMap random_costs(const GenConfig& cfg, Rng& rng) {
    CostMap costs(static_cast<std::size_t>(cfg.n));
    std::uniform_int_distribution<Cost> uniform(1, cfg.n);
    std::poisson_distribution<Cost> poisson(cfg.poisson_lambda);
    for (Vertex v = 0; v < cfg.n; ++v) {
        switch (cfg.cost_model) {
        case CostModel::kUnit: costs.set(v, 1); break;
        case CostModel::kUniform: costs.set(v, uniform(rng)); break;
        case CostModel::kPoisson: costs.set(v, poisson(rng)); break;
        }
    }
    return costs;
}

template <class T>
T pick(const std::vector<T>& items, Rng& rng) {
    std::uniform_int_distribution<std::size_t> d(0, items.size() - 1);
    return items[d(rng)];
}

// Grows bidirected-connected targets that are pairwise non-adjacent via bidirected edges.
std::optional<VertexSet> draw_targets(const Admg& g, int count, int target_size, Rng& rng) {
    const auto n = static_cast<std::size_t>(g.size());
    std::vector<char> blocked(n, 0);  // in a target or bidirected-adjacent to one
    VertexSet all_targets;
    for (int t = 0; t < count; ++t) {
        std::vector<Vertex> free;
        for (Vertex v = 0; v < g.size(); ++v)
            if (!blocked[static_cast<std::size_t>(v)]) free.push_back(v);
        if (free.empty()) return std::nullopt;
        const int size = target_size > 0 ? target_size
                                         : std::uniform_int_distribution<int>(1, std::max(1, g.size() / 4))(rng);
        std::vector<char> local_block = blocked;
        VertexSet target{pick(free, rng)};
        local_block[static_cast<std::size_t>(target.front())] = 1;
        while (static_cast<int>(target.size()) < size) {
            std::vector<Vertex> frontier;
            for (Vertex v : target)
                for (Vertex w : g.siblings_of(v))
                    if (!local_block[static_cast<std::size_t>(w)]) frontier.push_back(w);
            if (frontier.empty()) break;
            frontier = make_set(std::move(frontier));
            const Vertex w = pick(frontier, rng);
            local_block[static_cast<std::size_t>(w)] = 1;
            target = set_union(target, {w});
        }
        for (Vertex v : target) {
            blocked[static_cast<std::size_t>(v)] = 1;
            for (Vertex w : g.siblings_of(v)) blocked[static_cast<std::size_t>(w)] = 1;
        }
        all_targets = set_union(all_targets, target);
    }
    return all_targets;
}

}  // namespace

GeneratedInstance gen_admg(const GenConfig& cfg) {
    check_config(cfg);
    for (int attempt = 0; attempt < cfg.max_retries; ++attempt) {
        Rng rng(attempt == 0 ? cfg.seed : splitmix64(cfg.seed + static_cast<std::uint64_t>(attempt)));
        GeneratedInstance inst{random_graph(cfg.n, cfg.p_dir, cfg.p_bid, rng), {}, {}, {}, attempt + 1};
        inst.costs = random_costs(cfg, rng);

        if (cfg.query_model == QueryModel::kRandomXY) {
            std::vector<Vertex> perm(static_cast<std::size_t>(cfg.n));
            std::iota(perm.begin(), perm.end(), 0);
            std::shuffle(perm.begin(), perm.end(), rng);
            const int nx = std::uniform_int_distribution<int>(1, std::min(3, cfg.n - 1))(rng);
            inst.y = {perm[0]};
            inst.x = make_set({perm.begin() + 1, perm.begin() + 1 + nx});
            return inst;
        }

        const int r = cfg.query_model == QueryModel::kDistricts ? cfg.districts : 1;
        auto targets = draw_targets(inst.g, r, cfg.target_size, rng);
        if (!targets) continue;
        inst.y = *targets;
        inst.x = set_difference(parents(inst.g, inst.y), inst.y);
        if (inst.x.empty()) {
            const VertexSet rest = set_difference(inst.g.all(), inst.y);
            if (rest.empty()) continue;
            inst.x = {pick(rest, rng)};
        }
        return inst;
    }
    throw ResourceError("gen_admg: no valid draw after " + std::to_string(cfg.max_retries) + " attempts");
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
    T value{};
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) throw ConfigError("sweep key '" + key + "': bad number '" + text + "'");
    return value;
}

// "a,b,c" or "start:stop:step" (inclusive, rounded to the step grid).
template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
    std::vector<T> out;
    for (const auto& item : split(text, ',')) {
        const auto parts = split(item, ':');
        if (parts.size() == 1) {
            out.push_back(parse_number<T>(key, parts[0]));
        } else if (parts.size() == 3) {
            const T lo = parse_number<T>(key, parts[0]);
            const T hi = parse_number<T>(key, parts[1]);
            const T step = parse_number<T>(key, parts[2]);
            if (!(step > 0) || hi < lo) throw ConfigError("sweep key '" + key + "': bad range '" + item + "'");
            const auto count = static_cast<long long>(std::floor((hi - lo) / static_cast<double>(step) + 1e-9));
            for (long long k = 0; k <= count; ++k) {
                const double v = static_cast<double>(lo) + static_cast<double>(k) * static_cast<double>(step);
                out.push_back(static_cast<T>(std::is_integral_v<T> ? v : std::round(v * 1e9) / 1e9));
            }
        } else {
            throw ConfigError("sweep key '" + key + "': bad list item '" + item + "'");
        }
    }
    if (out.empty()) throw ConfigError("sweep key '" + key + "' is empty");
    return out;
}

std::string_view cost_model_name(CostModel m) {
    switch (m) {
    case CostModel::kUnit: return "unit";
    case CostModel::kUniform: return "uniform";
    case CostModel::kPoisson: return "poisson";
    }
    return "?";
}

std::string_view query_model_name(QueryModel m) {
    switch (m) {
    case QueryModel::kSingleDistrictTarget: return "single_district_target";
    case QueryModel::kRandomXY: return "random_xy";
    case QueryModel::kDistricts: return "districts";
    }
    return "?";
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string format_fixed(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

template <class T, class F>
std::string join(const std::vector<T>& items, F&& fmt) {
    std::string out;
    for (std::size_t k = 0; k < items.size(); ++k) {
        if (k) out += ',';
        out += fmt(items[k]);
    }
    return out;
}

}  // namespace

SweepSpec SweepSpec::parse(std::istream& in) {
    SweepSpec spec;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("sweep line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "n") {
            spec.n = parse_list<int>(key, value);
        } else if (key == "graphs") {
            spec.graphs = parse_number<std::size_t>(key, value);
        } else if (key == "p_dir") {
            spec.p_dir = parse_list<double>(key, value);
        } else if (key == "p_bid") {
            spec.p_bid = parse_list<double>(key, value);
        } else if (key == "pairing") {
            if (value == "grid") spec.pairing = Pairing::kGrid;
            else if (value == "paired") spec.pairing = Pairing::kPaired;
            else throw ConfigError("sweep key 'pairing' must be grid or paired");
        } else if (key == "districts") {
            spec.districts = parse_list<int>(key, value);
        } else if (key == "methods") {
            spec.methods.clear();
            for (const auto& m : split(value, ',')) spec.methods.push_back(parse_method(m));
            if (spec.methods.empty()) throw ConfigError("sweep key 'methods' is empty");
        } else if (key == "oracle") {
            spec.oracle = value == "none" ? std::nullopt : std::optional<Method>(parse_method(value));
        } else if (key == "cost_model") {
            if (value == "unit") spec.cost_model = CostModel::kUnit;
            else if (value == "uniform") spec.cost_model = CostModel::kUniform;
            else if (value == "poisson") spec.cost_model = CostModel::kPoisson;
            else throw ConfigError("sweep key 'cost_model' must be unit, uniform or poisson");
        } else if (key == "poisson_lambda") {
            spec.poisson_lambda = parse_number<double>(key, value);
        } else if (key == "query_model") {
            if (value == "single_district_target") spec.query_model = QueryModel::kSingleDistrictTarget;
            else if (value == "random_xy") spec.query_model = QueryModel::kRandomXY;
            else if (value == "districts") spec.query_model = QueryModel::kDistricts;
            else throw ConfigError("sweep key 'query_model' has unknown value '" + value + "'");
        } else if (key == "target_size") {
            spec.target_size = parse_number<int>(key, value);
        } else if (key == "seed") {
            spec.seed = parse_number<std::uint64_t>(key, value);
        } else if (key == "threads") {
            spec.threads = parse_number<int>(key, value);
        } else if (key == "timeout_ms") {
            spec.timeout_ms = parse_number<std::int64_t>(key, value);
        } else if (key == "soft_form") {
            if (value == "per_slot") spec.soft_form = SoftForm::kPerSlotUnit;
            else if (value == "literal") spec.soft_form = SoftForm::kLiteral;
            else throw ConfigError("sweep key 'soft_form' must be per_slot or literal");
        } else if (key == "maxsat_cmd") {
            spec.maxsat_command = value;
        } else if (key == "ilp_cmd") {
            spec.ilp_command = value;
        } else {
            throw ConfigError("unknown sweep key '" + key + "'");
        }
    }
    if (spec.pairing == Pairing::kPaired && spec.p_dir.size() != spec.p_bid.size())
        throw ConfigError("paired sweeps need p_dir and p_bid lists of equal length");
    if (spec.graphs == 0) throw ConfigError("sweep key 'graphs' must be positive");
    if (spec.timeout_ms <= 0) throw ConfigError("sweep key 'timeout_ms' must be positive");
    return spec;
}

SweepSpec SweepSpec::parse_string(const std::string& text) {
    std::istringstream in(text);
    return parse(in);
}

std::vector<std::pair<std::string, std::string>> SweepSpec::echo() const {
    const auto num = [](auto v) { return std::to_string(v); };
    std::vector<std::pair<std::string, std::string>> out{
        {"n", join(n, num)},
        {"graphs", std::to_string(graphs)},
        {"p_dir", join(p_dir, format_double)},
        {"p_bid", join(p_bid, format_double)},
        {"pairing", pairing == Pairing::kGrid ? "grid" : "paired"},
        {"districts", join(districts, num)},
        {"methods", join(methods, [](Method m) { return std::string(method_name(m)); })},
        {"oracle", oracle ? std::string(method_name(*oracle)) : "none"},
        {"cost_model", std::string(cost_model_name(cost_model))},
        {"query_model", std::string(query_model_name(query_model))},
        {"target_size", std::to_string(target_size)},
        {"seed", std::to_string(seed)},
        {"timeout_ms", std::to_string(timeout_ms)},
        {"soft_form", soft_form == SoftForm::kPerSlotUnit ? "per_slot" : "literal"},
    };
    if (cost_model == CostModel::kPoisson) out.emplace_back("poisson_lambda", format_double(poisson_lambda));
    return out;
}

std::vector<SweepPoint> sweep_points(const SweepSpec& spec) {
    std::vector<std::pair<double, double>> probs;
    if (spec.pairing == Pairing::kPaired) {
        for (std::size_t k = 0; k < spec.p_dir.size(); ++k) probs.emplace_back(spec.p_dir[k], spec.p_bid[k]);
    } else {
        for (double a : spec.p_dir)
            for (double b : spec.p_bid) probs.emplace_back(a, b);
    }
    std::vector<SweepPoint> out;
    for (int n : spec.n)
        for (auto [a, b] : probs)
            for (int r : spec.districts) out.push_back({n, a, b, r});
    return out;
}

std::optional<double> ci99_halfwidth(const std::vector<double>& values) {
    if (values.size() < 2) return std::nullopt;
    const double k = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / k;
    double ss = 0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return 2.576 * std::sqrt(ss / (k - 1)) / std::sqrt(k);
}

namespace {

struct Outcome {
    std::string status;
    std::optional<SolveReport> report;
};

Outcome run_method(const PreparedQuery& pq, const CostMap& costs, Method m, const SweepSpec& spec) {
    SolveOptions opts;
    opts.soft_form = spec.soft_form;
    const auto command = [&](const std::string& text) {
        SolverCommand c;
        c.command = text;
        c.timeout = std::chrono::milliseconds(spec.timeout_ms);
        return c;
    };
    if (!spec.maxsat_command.empty()) opts.maxsat_command = command(spec.maxsat_command);
    if (!spec.ilp_command.empty()) opts.ilp_command = command(spec.ilp_command);
    opts.deadline = Deadline::after(std::chrono::milliseconds(spec.timeout_ms));
    try {
        SolveReport r = solve(pq, costs, m, opts);
        std::string status = r.status;
        return {std::move(status), std::move(r)};
    } catch (const TimeoutError&) {
        return {"timeout", std::nullopt};
    } catch (const InfeasibleError&) {
        return {"infeasible", std::nullopt};
    } catch (const ResourceError&) {
        return {"resource", std::nullopt};
    } catch (const ConfigError&) {
        return {"config", std::nullopt};
    } catch (const VerificationError&) {
        return {"error", std::nullopt};
    }
}

std::vector<BenchRecord> run_instance(const SweepSpec& spec, const SweepPoint& pt, std::size_t point,
                                      std::size_t instance) {
    GenConfig cfg;
    cfg.n = pt.n;
    cfg.p_dir = pt.p_dir;
    cfg.p_bid = pt.p_bid;
    cfg.cost_model = spec.cost_model;
    cfg.poisson_lambda = spec.poisson_lambda;
    cfg.seed = instance_seed(spec.seed, point, instance);
    cfg.query_model = spec.query_model;
    cfg.target_size = spec.target_size;
    cfg.districts = pt.districts;

    std::vector<BenchRecord> out;
    const auto blank = [&](Method m) {
        BenchRecord rec;
        rec.point = point;
        rec.instance = instance;
        rec.config = pt;
        rec.method = std::string(method_name(m));
        return rec;
    };

    GeneratedInstance inst;
    try {
        inst = gen_admg(cfg);
    } catch (const ResourceError&) {
        for (Method m : spec.methods) {
            out.push_back(blank(m));
            out.back().status = "generation";
        }
        return out;
    }
    const PreparedQuery pq = prepare(inst.g, inst.x, inst.y);
    const CostMap costs = pq.project(inst.costs);

    std::map<Method, Outcome> outcomes;
    for (Method m : spec.methods) outcomes.emplace(m, run_method(pq, costs, m, spec));
    std::optional<Cost> optimum;
    if (spec.oracle) {
        auto it = outcomes.find(*spec.oracle);
        if (it == outcomes.end()) it = outcomes.emplace(*spec.oracle, run_method(pq, costs, *spec.oracle, spec)).first;
        if (it->second.report) optimum = it->second.report->cost;
    }

    for (Method m : spec.methods) {
        const Outcome& o = outcomes.at(m);
        BenchRecord rec = blank(m);
        rec.status = o.status;
        rec.optimal_cost = optimum;
        if (o.report) {
            rec.cost = o.report->cost;
            rec.wall_time_ms = o.report->wall_time_ms;
            rec.nodes = o.report->nodes_explored;
            rec.hedges = o.report->hedges_discovered;
            if (optimum) {
                if (*optimum > 0) rec.normalized_cost = static_cast<double>(*rec.cost) / static_cast<double>(*optimum);
                else if (*rec.cost == 0) rec.normalized_cost = 1.0;
            }
        }
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace

ExperimentResult run_experiment(const SweepSpec& spec) {
    const std::vector<SweepPoint> points = sweep_points(spec);
    const std::size_t tasks = points.size() * spec.graphs;
    std::vector<std::vector<BenchRecord>> slots(tasks);
    const auto run = [&](std::size_t t) {
        slots[t] = run_instance(spec, points[t / spec.graphs], t / spec.graphs, t % spec.graphs);
    };

    if (spec.threads == 1) {
        for (std::size_t t = 0; t < tasks; ++t) run(t);
    } else {
        const int threads = spec.threads > 0 ? spec.threads : omp_get_max_threads();
        // Exceptions may not cross the parallel region; the first one is rethrown afterwards.
        std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) num_threads(threads)
        for (std::size_t t = 0; t < tasks; ++t) {
            try {
                run(t);
            } catch (...) {
#pragma omp critical
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);
    }

    ExperimentResult result;
    for (auto& slot : slots)
        for (auto& rec : slot) result.records.push_back(std::move(rec));

    for (std::size_t p = 0; p < points.size(); ++p) {
        for (Method m : spec.methods) {
            AggregateRecord agg;
            agg.point = p;
            agg.config = points[p];
            agg.method = std::string(method_name(m));
            std::vector<double> costs;
            std::vector<double> normalized;
            double wall = 0;
            for (const auto& rec : result.records) {
                if (rec.point != p || rec.method != agg.method) continue;
                ++agg.total;
                if (!rec.cost) continue;
                ++agg.solved;
                costs.push_back(static_cast<double>(*rec.cost));
                wall += rec.wall_time_ms;
                if (rec.normalized_cost) normalized.push_back(*rec.normalized_cost);
            }
            const auto mean = [](const std::vector<double>& v) {
                return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
            };
            if (!costs.empty()) {
                agg.mean_cost = mean(costs);
                agg.mean_wall_time_ms = wall / static_cast<double>(costs.size());
            }
            if (!normalized.empty()) {
                agg.mean_normalized = mean(normalized);
                agg.ci99_halfwidth = ci99_halfwidth(normalized);
            }
            result.aggregates.push_back(std::move(agg));
        }
    }
    return result;
}

void write_csv(std::ostream& out, const SweepSpec& spec, const ExperimentResult& result) {
    out << "# mcid bench\n";
    for (const auto& [k, v] : spec.echo()) out << "# " << k << " = " << v << '\n';
    out << "# ci99: normal approximation, z = 2.576, over normalized_cost\n";
    out << "# aggregate rows: instance = solved/total, cost = mean cost\n";
    out << "row_type,point,instance,n,p_dir,p_bid,districts,method,status,cost,optimal_cost,normalized_cost,"
           "ci99_halfwidth,wall_time_ms,nodes,hedges\n";
    const auto opt_int = [](const std::optional<Cost>& c) { return c ? std::to_string(*c) : std::string(); };
    const auto opt_dbl = [](const std::optional<double>& d) { return d ? format_fixed(*d) : std::string(); };
    const auto prefix = [&](const char* type, std::size_t point, const std::string& instance, const SweepPoint& c) {
        out << type << ',' << point << ',' << instance << ',' << c.n << ',' << format_double(c.p_dir) << ','
            << format_double(c.p_bid) << ',' << c.districts << ',';
    };
    for (const auto& r : result.records) {
        prefix("instance", r.point, std::to_string(r.instance), r.config);
        out << r.method << ',' << r.status << ',' << opt_int(r.cost) << ',' << opt_int(r.optimal_cost) << ','
            << opt_dbl(r.normalized_cost) << ",," << format_fixed(r.wall_time_ms) << ',' << r.nodes << ','
            << r.hedges << '\n';
    }
    for (const auto& a : result.aggregates) {
        prefix("aggregate", a.point, std::to_string(a.solved) + "/" + std::to_string(a.total), a.config);
        out << a.method << ',' << (a.solved == a.total ? "ok" : "partial") << ',' << opt_dbl(a.mean_cost) << ",,"
            << opt_dbl(a.mean_normalized) << ',' << opt_dbl(a.ci99_halfwidth) << ','
            << format_fixed(a.mean_wall_time_ms) << ",,\n";
    }
}

}  // namespace mcid
