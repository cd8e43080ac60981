#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mcid/cnf.hpp"
#include "mcid/ilp.hpp"

namespace mcid {

/// Classic DIMACS WCNF: "p wcnf <vars> <clauses> <top>", hard clauses first with weight top.
/// When `vars` and `g` are given, one "c var <id> <tag>" comment per variable precedes the header.
void write_wcnf(std::ostream& out, const WcnfInstance& instance, const VarMap* vars = nullptr,
                const Admg* g = nullptr);
WcnfInstance read_wcnf(std::istream& in);

/// CPLEX LP text with a Binary section. The constant objective offset is written as a
/// "\ objective offset: <n>" comment because the format has no constant term.
void write_lp(std::ostream& out, const IlpInstance& ilp);
IlpInstance read_lp(std::istream& in);

enum class SolverStatus { kOptimum, kSatisfiable, kUnsatisfiable, kUnknown };

struct MaxSatOutput {
    SolverStatus status = SolverStatus::kUnknown;
    std::optional<Cost> reported_cost;  // last "o" line
    std::vector<bool> model;            // model[0] unused; empty when no "v" line
};

/// Parses MaxSAT-evaluation style output: "s ..." status, "o <cost>", and "v" lines given
/// either as signed integers or as one 0/1 string.
MaxSatOutput parse_maxsat_output(const std::string& text, int num_vars);

struct LpSolution {
    SolverStatus status = SolverStatus::kUnknown;
    std::vector<bool> values;  // by ILP variable; empty when none were found
};

/// Reads "<name> <value>" pairs from a solution file (CBC, Gurobi .sol, SCIP and similar
/// all produce lines where a variable name is followed by its value). Values above 0.5
/// count as 1. Missing variables default to 0.
LpSolution parse_lp_solution(const std::string& text, const IlpInstance& ilp);

}  // namespace mcid
