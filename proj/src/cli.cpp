#include "mcid/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mcid/adjustment.hpp"
#include "mcid/bench.hpp"
#include "mcid/formats.hpp"
#include "mcid/graph_io.hpp"
#include "mcid/ilp.hpp"
#include "mcid/objectives.hpp"
#include "mcid/sat_reference.hpp"
#include "mcid/solvers.hpp"

namespace mcid {
namespace {

using nlohmann::json;

struct GraphArgs {
    std::string path;
    std::string x;
    std::string y;
    Cost cost_scale = 1;
};

void add_graph_args(CLI::App* cmd, GraphArgs& a) {
    cmd->add_option("graph", a.path, "Graph file")->required();
    cmd->add_option("--x", a.x, "Intervened vertices, comma separated (overrides the file)");
    cmd->add_option("--y", a.y, "Outcome vertices, comma separated (overrides the file)");
    cmd->add_option("--cost-scale", a.cost_scale, "Multiplier applied to decimal costs")->check(CLI::PositiveNumber);
}

VertexSet parse_labels(const Admg& g, const std::string& text) {
    VertexSet out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        const auto e = item.find_last_not_of(" \t");
        out.push_back(g.at(item.substr(b, e - b + 1)));
    }
    return make_set(std::move(out));
}

GraphFile load(const GraphArgs& a) {
    GraphFile file = load_graph_file(a.path, ParseOptions{a.cost_scale});
    if (!a.x.empty()) file.x = parse_labels(file.graph, a.x);
    if (!a.y.empty()) file.y = parse_labels(file.graph, a.y);
    if (!file.has_query()) throw InputError(a.path + ": no query; give X:/Y: lines or --x/--y");
    return file;
}

json labels(const Admg& g, const VertexSet& set) {
    json out = json::array();
    for (Vertex v : set) out.push_back(g.label(v));
    return out;
}

// Family members index into pq.g; output uses the labels of the input graph.
json family_json(const GraphFile& file, const PreparedQuery& pq, const InterventionFamily& family) {
    json out = json::array();
    for (const auto& member : family.sets) out.push_back(labels(file.graph, pq.to_original(member)));
    return out;
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    return out;
}

SoftForm parse_soft_form(const std::string& name) {
    if (name == "per_slot") return SoftForm::kPerSlotUnit;
    if (name == "literal") return SoftForm::kLiteral;
    throw ConfigError("unknown soft form '" + name + "'");
}

Backend parse_backend(const std::string& name) {
    if (name == "auto") return Backend::kAuto;
    if (name == "reference") return Backend::kReference;
    if (name == "enumerate") return Backend::kEnumerate;
    if (name == "external") return Backend::kExternal;
    throw ConfigError("unknown backend '" + name + "'");
}

struct IdentifyArgs {
    GraphArgs graph;
    std::vector<std::string> family;
};

int cmd_identify(const IdentifyArgs& a, std::ostream& out) {
    const GraphFile file = load(a.graph);
    const PreparedQuery pq = prepare(file.graph, file.x, file.y);
    std::vector<VertexSet> sets;
    for (const auto& spec : a.family) {
        std::stringstream ss(spec);
        std::string member;
        bool any = false;
        while (std::getline(ss, member, ';')) {
            sets.push_back(pq.from_original(parse_labels(file.graph, member)));
            any = true;
        }
        if (!any) sets.emplace_back();
    }
    // Without --family only observational data is available.
    if (a.family.empty()) sets.emplace_back();
    const CostMap costs = pq.project(file.costs);
    const InterventionFamily family = InterventionFamily::of(sets, costs);
    const bool ok = is_identifiable(pq, family);
    json districts = json::array();
    for (const auto& d : pq.districts) districts.push_back(labels(file.graph, pq.to_original(d)));
    emit(out, {{"method", "identify"},
               {"identifiable", ok},
               {"cost", family.total_cost},
               {"family", family_json(file, pq, family)},
               {"adjustment", nullptr},
               {"districts", districts},
               {"status", ok ? "identifiable" : "not_identifiable"}});
    return kExitOk;
}

struct SolveArgs {
    GraphArgs graph;
    std::string method = "mhs";
    std::string solver_cmd;
    std::string backend = "auto";
    std::string soft_form = "per_slot";
    std::int64_t timeout_ms = 0;
};

int cmd_solve(const SolveArgs& a, std::ostream& out) {
    const GraphFile file = load(a.graph);
    const Method method = parse_method(a.method);
    SolveOptions opts;
    opts.backend = parse_backend(a.backend);
    opts.soft_form = parse_soft_form(a.soft_form);
    if (a.timeout_ms > 0) opts.deadline = Deadline::after(std::chrono::milliseconds(a.timeout_ms));
    if (!a.solver_cmd.empty()) {
        SolverCommand cmd;
        cmd.command = a.solver_cmd;
        if (a.timeout_ms > 0) cmd.timeout = std::chrono::milliseconds(a.timeout_ms);
        if (method == Method::kIlp) opts.ilp_command = cmd;
        else opts.maxsat_command = cmd;
    }
    const PreparedQuery pq = prepare(file.graph, file.x, file.y);
    const SolveReport r = solve(pq, pq.project(file.costs), method, opts);
    json j{{"method", r.method},
           {"cost", r.cost},
           {"family", family_json(file, pq, r.solution)},
           {"adjustment", r.adjustment ? labels(file.graph, pq.to_original(*r.adjustment)) : json(nullptr)},
           {"status", r.status},
           {"nodes", r.nodes_explored},
           {"hedges", r.hedges_discovered},
           {"wall_time_ms", r.wall_time_ms}};
    if (r.per_district_cost) j["per_district_cost"] = *r.per_district_cost;
    if (!r.bound_trace.empty()) j["bound_trace"] = r.bound_trace;
    emit(out, j);
    return kExitOk;
}

struct EncodeArgs {
    GraphArgs graph;
    std::string format = "wcnf";
    std::string output;
    std::string soft_form = "per_slot";
};

int cmd_encode(const EncodeArgs& a, std::ostream& out) {
    const GraphFile file = load(a.graph);
    const PreparedQuery pq = prepare(file.graph, file.x, file.y);
    const CostMap costs = pq.project(file.costs);
    const Encoding enc = pq.districts.size() == 1 ? build_cnf_single(pq.g, pq.districts.front()) : build_cnf_multi(pq);
    const WcnfInstance w = attach_soft(enc, costs, parse_soft_form(a.soft_form));
    std::ofstream f = open_output(a.output);
    json j{{"format", a.format}, {"file", a.output}, {"variables", w.hard.num_vars},
           {"hard_clauses", w.hard.clauses.size()}, {"soft_clauses", w.soft.size()}, {"top", w.top}};
    if (a.format == "wcnf") {
        write_wcnf(f, w, &enc.vars, &pq.g);
    } else if (a.format == "lp") {
        const IlpInstance ilp = build_ilp(w);
        write_lp(f, ilp);
        j["ilp_variables"] = ilp.size();
        j["constraints"] = ilp.constraints.size();
    } else {
        throw ConfigError("unknown encoding format '" + a.format + "'");
    }
    if (!f) throw IoError("failed writing " + a.output);
    emit(out, j);
    return kExitOk;
}

int cmd_adjust(const GraphArgs& a, std::ostream& out) {
    const GraphFile file = load(a);
    const AdjustmentResult r = gen_adjustment(file.graph, file.x, file.y, file.costs);
    if (!verify_adjustment(file.graph, r.x_minimal, file.y, r.intervention, r.adjustment))
        throw VerificationError("adjustment failed the vertex-cut check");
    emit(out, {{"method", "adjust"},
               {"cost", r.cost},
               {"family", json::array({labels(file.graph, r.intervention)})},
               {"adjustment", labels(file.graph, r.adjustment)},
               {"x_minimal", labels(file.graph, r.x_minimal)},
               {"s", labels(file.graph, r.s)},
               {"status", r.parents_s.empty() ? "no_parents" : "verified"}});
    return kExitOk;
}

struct BenchArgs {
    std::string config;
    std::string output;
    std::optional<int> threads;
};

int cmd_bench(const BenchArgs& a, std::ostream& out) {
    std::ifstream in(a.config);
    if (!in) throw IoError("cannot open " + a.config);
    SweepSpec spec = SweepSpec::parse(in);
    if (a.threads) spec.threads = *a.threads;
    const ExperimentResult result = run_experiment(spec);
    if (a.output.empty() || a.output == "-") {
        write_csv(out, spec, result);
        return kExitOk;
    }
    std::ofstream f = open_output(a.output);
    write_csv(f, spec, result);
    if (!f) throw IoError("failed writing " + a.output);
    std::size_t timeouts = 0;
    for (const auto& rec : result.records) timeouts += rec.status == "timeout";
    emit(out, {{"file", a.output},
               {"instance_rows", result.records.size()},
               {"aggregate_rows", result.aggregates.size()},
               {"timeouts", timeouts}});
    return kExitOk;
}

struct RolloutArgs {
    GraphArgs graph;
    std::string policy = "greedy_ratio";
    std::uint64_t seed = 0;
    std::string trajectory;
};

int cmd_rollout(const RolloutArgs& a, std::ostream& out) {
    const GraphFile file = load(a.graph);
    const PreparedQuery pq = prepare(file.graph, file.x, file.y);
    if (pq.districts.size() != 1) throw InputError("rollout needs a query with a single district");
    const RolloutResult r = rollout(pq.g, pq.districts.front(), pq.project(file.costs), parse_policy(a.policy), a.seed);
    if (!a.trajectory.empty()) {
        std::ofstream f = open_output(a.trajectory);
        write_trajectory(f, pq.g, r.steps);
    }
    json steps = json::array();
    for (const auto& st : r.steps) steps.push_back({{"hull_size", st.hull_size}, {"action", pq.g.label(st.action)}, {"reward", st.reward}});
    emit(out, {{"method", "rollout"},
               {"policy", a.policy},
               {"cost", r.report.cost},
               {"family", family_json(file, pq, r.report.solution)},
               {"adjustment", nullptr},
               {"total_reward", r.total_reward},
               {"steps", steps},
               {"status", r.report.status}});
    return kExitOk;
}

struct RefsolveArgs {
    std::string input;
    std::string format = "wcnf";
    std::int64_t timeout_ms = 0;
};

// Reference engines behind a solver-style interface, so the external bridge can be exercised.
int cmd_refsolve(const RefsolveArgs& a, std::ostream& out) {
    std::istringstream in(read_text(a.input));
    const Deadline deadline = a.timeout_ms > 0 ? Deadline::after(std::chrono::milliseconds(a.timeout_ms)) : Deadline{};
    if (a.format == "wcnf") {
        const WcnfInstance w = read_wcnf(in);
        const sat::MaxSatResult r = sat::solve_maxsat(w, deadline);
        if (!r.satisfiable) {
            out << "s UNSATISFIABLE\n";
            return kExitOk;
        }
        out << "o " << r.cost << "\ns OPTIMUM FOUND\nv";
        for (int v = 1; v <= w.hard.num_vars; ++v) out << ' ' << (r.model[static_cast<std::size_t>(v)] ? v : -v);
        out << '\n';
    } else if (a.format == "lp") {
        const IlpInstance ilp = read_lp(in);
        const IlpResult r = solve_ilp(ilp, deadline);
        if (!r.feasible) {
            out << "infeasible\n";
            return kExitOk;
        }
        out << "optimal objective " << r.objective << '\n';
        for (int j = 0; j < ilp.size(); ++j)
            if (r.values[static_cast<std::size_t>(j)]) out << ilp.names[static_cast<std::size_t>(j)] << " 1\n";
    } else {
        throw ConfigError("unknown format '" + a.format + "'");
    }
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Minimum-cost intervention design for causal effect identification", "mcid"};
    app.require_subcommand(1);

    IdentifyArgs identify;
    auto* c_identify = app.add_subcommand("identify", "Check whether a family of interventions identifies the query");
    add_graph_args(c_identify, identify.graph);
    c_identify->add_option("--family", identify.family,
                           "Intervention set(s): comma-separated labels, ';' between sets; repeatable");

    SolveArgs solve_a;
    auto* c_solve = app.add_subcommand("solve", "Find a minimum-cost intervention family");
    add_graph_args(c_solve, solve_a.graph);
    c_solve->add_option("--method", solve_a.method, "sat|ilp|mhs|brute|adjust|h1")->capture_default_str();
    c_solve->add_option("--solver-cmd", solve_a.solver_cmd,
                        "External MaxSAT (sat) or ILP (ilp) command; {input} and {output} are substituted");
    c_solve->add_option("--backend", solve_a.backend, "auto|reference|enumerate|external")->capture_default_str();
    c_solve->add_option("--soft-form", solve_a.soft_form, "per_slot|literal")->capture_default_str();
    c_solve->add_option("--timeout-ms", solve_a.timeout_ms, "Time limit in milliseconds");

    EncodeArgs encode;
    auto* c_encode = app.add_subcommand("encode", "Write the MaxSAT or ILP encoding of the query");
    add_graph_args(c_encode, encode.graph);
    c_encode->add_option("--format", encode.format, "wcnf|lp")->capture_default_str();
    c_encode->add_option("-o,--output", encode.output, "Output file")->required();
    c_encode->add_option("--soft-form", encode.soft_form, "per_slot|literal")->capture_default_str();

    GraphArgs adjust;
    auto* c_adjust = app.add_subcommand("adjust", "Cheapest intervention admitting an adjustment set");
    add_graph_args(c_adjust, adjust);

    BenchArgs bench;
    auto* c_bench = app.add_subcommand("bench", "Run a random-instance sweep");
    c_bench->add_option("--config", bench.config, "Sweep file (key = value lines)")->required();
    c_bench->add_option("-o,--output", bench.output, "CSV file (stdout when omitted)");
    c_bench->add_option("--threads", bench.threads, "Worker threads; 1 runs the serial loop");

    RolloutArgs roll;
    auto* c_env = app.add_subcommand("env", "Hedge-removal environment");
    c_env->require_subcommand(1);
    auto* c_rollout = c_env->add_subcommand("rollout", "Run one episode with a fixed policy");
    add_graph_args(c_rollout, roll.graph);
    c_rollout->add_option("--policy", roll.policy, "greedy_cost|greedy_ratio|random")->capture_default_str();
    c_rollout->add_option("--seed", roll.seed, "Seed for the random policy");
    c_rollout->add_option("--trajectory", roll.trajectory, "Write the per-step log to this file");

    RefsolveArgs ref;
    auto* c_ref = app.add_subcommand("refsolve", "Solve a WCNF or LP file with the internal engines");
    c_ref->group("");
    c_ref->add_option("input", ref.input)->required();
    c_ref->add_option("--format", ref.format);
    c_ref->add_option("--timeout-ms", ref.timeout_ms);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (c_identify->parsed()) return cmd_identify(identify, out);
        if (c_solve->parsed()) return cmd_solve(solve_a, out);
        if (c_encode->parsed()) return cmd_encode(encode, out);
        if (c_adjust->parsed()) return cmd_adjust(adjust, out);
        if (c_bench->parsed()) return cmd_bench(bench, out);
        if (c_rollout->parsed()) return cmd_rollout(roll, out);
        if (c_ref->parsed()) return cmd_refsolve(ref, out);
    } catch (const InfeasibleError& e) {
        err << "infeasible: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const IoError& e) {
        err << "input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const ActionError& e) {
        err << "input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ResourceError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const TimeoutError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitConfig;
}

}  // namespace mcid
