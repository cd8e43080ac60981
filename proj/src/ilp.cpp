#include "mcid/ilp.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>

namespace mcid {

int IlpInstance::add_variable(std::string name) {
    names.push_back(std::move(name));
    objective.push_back(0);
    return size() - 1;
}

IlpInstance build_ilp(const WcnfInstance& instance) {
    IlpInstance ilp;
    for (int v = 1; v <= instance.hard.num_vars; ++v) ilp.add_variable("x" + std::to_string(v));

    auto covering = [](const Clause& clause, std::string name) {
        LinearConstraint c;
        c.name = std::move(name);
        Cost negatives = 0;
        for (Literal l : clause) {
            c.terms.push_back({l.var - 1, l.positive ? 1 : -1});
            if (!l.positive) ++negatives;
        }
        c.rhs = 1 - negatives;
        return c;
    };

    for (std::size_t i = 0; i < instance.hard.clauses.size(); ++i) {
        const Clause& clause = instance.hard.clauses[i];
        const std::string name = "h" + std::to_string(i + 1);
        if (clause.size() == 1) {
            const Literal l = clause.front();
            LinearConstraint c{name, {{l.var - 1, 1}}, l.positive ? LinearConstraint::Sense::kGreaterEqual
                                                                 : LinearConstraint::Sense::kLessEqual,
                               l.positive ? 1 : 0};
            ilp.constraints.push_back(std::move(c));
        } else {
            ilp.constraints.push_back(covering(clause, name));
        }
    }

    for (std::size_t k = 0; k < instance.soft.size(); ++k) {
        const auto& soft = instance.soft[k];
        if (soft.clause.size() == 1) {
            const Literal l = soft.clause.front();
            auto& coef = ilp.objective[static_cast<std::size_t>(l.var - 1)];
            if (l.positive) {
                coef -= soft.weight;
                ilp.objective_offset += soft.weight;
            } else {
                coef += soft.weight;
            }
            continue;
        }
        // b = 1 pays the weight and relaxes the clause.
        const int b = ilp.add_variable("b" + std::to_string(k + 1));
        ilp.objective[static_cast<std::size_t>(b)] = soft.weight;
        LinearConstraint c = covering(soft.clause, "s" + std::to_string(k + 1));
        c.terms.push_back({b, 1});
        ilp.constraints.push_back(std::move(c));
    }
    return ilp;
}

Cost ilp_objective(const IlpInstance& ilp, const std::vector<bool>& values) {
    Cost sum = ilp.objective_offset;
    for (std::size_t j = 0; j < ilp.objective.size(); ++j)
        if (values.at(j)) sum += ilp.objective[j];
    return sum;
}

bool ilp_feasible(const IlpInstance& ilp, const std::vector<bool>& values) {
    for (const auto& c : ilp.constraints) {
        Cost lhs = 0;
        for (const auto& t : c.terms)
            if (values.at(static_cast<std::size_t>(t.var))) lhs += t.coef;
        switch (c.sense) {
        case LinearConstraint::Sense::kGreaterEqual:
            if (lhs < c.rhs) return false;
            break;
        case LinearConstraint::Sense::kLessEqual:
            if (lhs > c.rhs) return false;
            break;
        case LinearConstraint::Sense::kEqual:
            if (lhs != c.rhs) return false;
            break;
        }
    }
    return true;
}

std::vector<bool> sat_model_from_ilp(const IlpInstance& ilp, const std::vector<bool>& values, int num_sat_vars) {
    std::map<std::string, int> index;
    for (int j = 0; j < ilp.size(); ++j) index.emplace(ilp.names[static_cast<std::size_t>(j)], j);
    std::vector<bool> model(static_cast<std::size_t>(num_sat_vars + 1), false);
    for (int v = 1; v <= num_sat_vars; ++v) {
        auto it = index.find("x" + std::to_string(v));
        if (it == index.end()) throw VerificationError("ILP solution lacks variable x" + std::to_string(v));
        model[static_cast<std::size_t>(v)] = values.at(static_cast<std::size_t>(it->second));
    }
    return model;
}

namespace {

struct Row {
    std::vector<LinearTerm> terms;
    Cost rhs = 0;  // Σ terms >= rhs
};

class Enumerator {
public:
    Enumerator(const IlpInstance& ilp, const Deadline& deadline) : ilp_(ilp), deadline_(deadline) {
        const auto n = static_cast<std::size_t>(ilp.size());
        occurrences_.resize(n);
        value_.assign(n, -1);
        for (const auto& c : ilp.constraints) {
            for (const auto& t : c.terms)
                if (t.var < 0 || t.var >= ilp.size()) throw InputError("constraint references unknown ILP variable");
            Row ge{c.terms, c.rhs};
            Row le{{}, -c.rhs};
            for (const auto& t : c.terms) le.terms.push_back({t.var, -t.coef});
            if (c.sense != LinearConstraint::Sense::kLessEqual) add_row(std::move(ge));
            if (c.sense != LinearConstraint::Sense::kGreaterEqual) add_row(std::move(le));
        }
        lower_bound_ = ilp.objective_offset;
        for (Cost c : ilp.objective) lower_bound_ += std::min<Cost>(0, c);
        for (int j = 0; j < ilp.size(); ++j)
            if (ilp.objective[static_cast<std::size_t>(j)] != 0) order_.push_back(j);
        objective_vars_ = order_.size();
        for (int j = 0; j < ilp.size(); ++j)
            if (ilp.objective[static_cast<std::size_t>(j)] == 0) order_.push_back(j);
    }

    IlpResult run() {
        bool ok = true;
        for (std::size_t r = 0; r < rows_.size() && ok; ++r) ok = max_activity_[r] >= rows_[r].rhs && force_row(r);
        if (ok && propagate()) search(0);
        return result_;
    }

private:
    void add_row(Row row) {
        const auto id = rows_.size();
        Cost max_act = 0;
        for (const auto& t : row.terms) {
            max_act += std::max<Cost>(0, t.coef);
            occurrences_[static_cast<std::size_t>(t.var)].push_back({static_cast<int>(id), t.coef});
        }
        max_activity_.push_back(max_act);
        rows_.push_back(std::move(row));
    }

    void set(int var, int val) {
        value_[static_cast<std::size_t>(var)] = static_cast<signed char>(val);
        trail_.push_back(var);
        const Cost obj = ilp_.objective[static_cast<std::size_t>(var)];
        lower_bound_ += obj * val - std::min<Cost>(0, obj);
        for (const auto& [row, coef] : occurrences_[static_cast<std::size_t>(var)])
            max_activity_[static_cast<std::size_t>(row)] -= std::max<Cost>(0, coef) - coef * val;
    }

    void undo(std::size_t mark) {
        while (trail_.size() > mark) {
            const int var = trail_.back();
            trail_.pop_back();
            const int val = value_[static_cast<std::size_t>(var)];
            const Cost obj = ilp_.objective[static_cast<std::size_t>(var)];
            lower_bound_ -= obj * val - std::min<Cost>(0, obj);
            for (const auto& [row, coef] : occurrences_[static_cast<std::size_t>(var)])
                max_activity_[static_cast<std::size_t>(row)] += std::max<Cost>(0, coef) - coef * val;
            value_[static_cast<std::size_t>(var)] = -1;
        }
        queue_head_ = std::min(queue_head_, mark);
    }

    // Fixes every free variable whose worse value would make the row unsatisfiable.
    bool force_row(std::size_t r) {
        const Cost slack = max_activity_[r] - rows_[r].rhs;
        if (slack < 0) return false;
        for (const auto& t : rows_[r].terms) {
            if (value_[static_cast<std::size_t>(t.var)] >= 0) continue;
            if (t.coef == 0 || std::abs(t.coef) <= slack) continue;
            set(t.var, t.coef > 0 ? 1 : 0);
        }
        return true;
    }

    bool propagate() {
        while (queue_head_ < trail_.size()) {
            const int var = trail_[queue_head_++];
            for (const auto& occ : occurrences_[static_cast<std::size_t>(var)])
                if (!force_row(static_cast<std::size_t>(occ.first))) return false;
        }
        return true;
    }

    bool assign(int var, int val) {
        set(var, val);
        return propagate();
    }

    // Returns true when the subtree is closed because no better solution can exist in it.
    bool search(std::size_t pos) {
        deadline_.check();
        ++result_.nodes;
        if (result_.feasible && lower_bound_ >= result_.objective) return true;
        while (pos < order_.size() && value_[static_cast<std::size_t>(order_[pos])] >= 0) ++pos;
        if (pos == order_.size()) {
            result_.feasible = true;
            result_.objective = lower_bound_;
            result_.values.assign(value_.begin(), value_.end());
            return true;
        }
        const int var = order_[pos];
        const Cost obj = ilp_.objective[static_cast<std::size_t>(var)];
        const int first = obj < 0 ? 1 : 0;
        for (int val : {first, 1 - first}) {
            const std::size_t m = trail_.size();
            bool closed = false;
            if (assign(var, val)) closed = search(pos + 1);
            undo(m);
            // Past the objective variables the cost is fixed, so one completion suffices.
            if (closed && pos >= objective_vars_ && result_.feasible) return true;
        }
        return false;
    }

    const IlpInstance& ilp_;
    const Deadline& deadline_;
    std::vector<Row> rows_;
    std::vector<Cost> max_activity_;
    std::vector<std::vector<std::pair<int, Cost>>> occurrences_;
    std::vector<signed char> value_;
    std::vector<int> trail_;
    std::size_t queue_head_ = 0;
    std::vector<int> order_;
    std::size_t objective_vars_ = 0;
    Cost lower_bound_ = 0;
    IlpResult result_;
};

}  // namespace

IlpResult solve_ilp(const IlpInstance& ilp, const Deadline& deadline) {
    if (ilp.objective.size() != ilp.names.size()) throw InputError("ILP objective and variable lists differ in size");
    Enumerator e(ilp, deadline);
    IlpResult r = e.run();
    if (r.feasible && !ilp_feasible(ilp, r.values)) throw VerificationError("ILP enumeration produced an infeasible point");
    return r;
}

}  // namespace mcid
