#pragma once

#include <string>
#include <vector>

#include "mcid/cnf.hpp"
#include "mcid/errors.hpp"

namespace mcid {

struct LinearTerm {
    int var = 0;  // 0-based ILP variable
    Cost coef = 0;
    bool operator==(const LinearTerm&) const = default;
};

struct LinearConstraint {
    enum class Sense { kGreaterEqual, kLessEqual, kEqual };
    std::string name;
    std::vector<LinearTerm> terms;
    Sense sense = Sense::kGreaterEqual;
    Cost rhs = 0;
    bool operator==(const LinearConstraint&) const = default;
};

/// Minimise objective·x + objective_offset over binary x subject to the constraints.
struct IlpInstance {
    std::vector<std::string> names;
    std::vector<Cost> objective;  // one coefficient per variable
    Cost objective_offset = 0;
    std::vector<LinearConstraint> constraints;

    int add_variable(std::string name);
    [[nodiscard]] int size() const { return static_cast<int>(names.size()); }
    bool operator==(const IlpInstance&) const = default;
};

/// 0/1 program equivalent to a weighted partial MaxSAT instance. SAT variable v becomes
/// ILP variable v-1 named "x<v>". Hard clauses become covering constraints; unit soft
/// clauses charge the objective directly; wider soft clauses get an indicator "b<k>".
/// The optimum objective (with offset) equals the MaxSAT optimum.
IlpInstance build_ilp(const WcnfInstance& instance);

struct IlpResult {
    bool feasible = false;
    Cost objective = 0;  // includes objective_offset
    std::vector<bool> values;
    std::size_t nodes = 0;
};

/// Exact solve by implicit enumeration with bound propagation. Reference backend for small
/// instances.
IlpResult solve_ilp(const IlpInstance& ilp, const Deadline& deadline = {});

/// SAT model (index 0 unused) from the x<v> variables of an ILP solution.
std::vector<bool> sat_model_from_ilp(const IlpInstance& ilp, const std::vector<bool>& values, int num_sat_vars);

/// Evaluates objective with offset.
Cost ilp_objective(const IlpInstance& ilp, const std::vector<bool>& values);
bool ilp_feasible(const IlpInstance& ilp, const std::vector<bool>& values);

}  // namespace mcid
