#pragma once

#include <optional>
#include <vector>

#include "mcid/cnf.hpp"
#include "mcid/errors.hpp"

namespace mcid::sat {

/// Unit propagation over two watched literals with an undoable trail. Small reference
/// engine used by the enumeration and MaxSAT searches; there is no clause learning.
class Engine {
public:
    explicit Engine(const CnfFormula& formula);

    /// False when the formula is unsatisfiable by propagation alone.
    [[nodiscard]] bool consistent() const { return consistent_; }
    [[nodiscard]] int num_vars() const { return num_vars_; }

    /// -1 unassigned, 0 false, 1 true.
    [[nodiscard]] int value(int var) const { return values_[static_cast<std::size_t>(var)]; }
    [[nodiscard]] int value(Literal l) const;

    [[nodiscard]] std::size_t mark() const { return trail_.size(); }
    /// Makes l true and propagates. Returns false on conflict; the caller must backtrack.
    bool assign(Literal l);
    void backtrack(std::size_t mark);

    /// Completes the current partial assignment (false-first DPLL). Returns a full model with
    /// model[0] unused, or nullopt. The engine state is restored either way.
    std::optional<std::vector<bool>> complete(const Deadline& deadline = {});

private:
    bool propagate();
    bool search(const Deadline& deadline);
    static std::size_t index(Literal l) { return static_cast<std::size_t>(2 * l.var + (l.positive ? 1 : 0)); }

    int num_vars_ = 0;
    bool consistent_ = true;
    std::vector<Clause> clauses_;
    std::vector<std::vector<int>> watches_;  // by literal index: clauses watching that literal
    std::vector<signed char> values_;
    std::vector<Literal> trail_;
    std::size_t queue_head_ = 0;
};

std::optional<std::vector<bool>> solve(const CnfFormula& formula, const Deadline& deadline = {});

/// Distinct satisfiable assignments of `projected` (bit i is the value of projected[i]).
/// More than `cap` results raises ResourceError.
std::vector<std::vector<bool>> enumerate_projected(const CnfFormula& formula, const std::vector<int>& projected,
                                                   std::size_t cap, const Deadline& deadline = {});

struct MaxSatResult {
    bool satisfiable = false;
    Cost cost = 0;
    std::vector<bool> model;  // model[0] unused
    std::size_t nodes = 0;
};

/// Exact weighted partial MaxSAT by branch and bound over the variables of the soft clauses.
MaxSatResult solve_maxsat(const WcnfInstance& instance, const Deadline& deadline = {});

}  // namespace mcid::sat
