#include "mcid/cnf.hpp"

#include <algorithm>

namespace mcid {

void CnfFormula::add(Clause clause) {
    for (const auto& lit : clause)
        if (lit.var < 1 || lit.var > num_vars) throw InputError("clause references unknown variable");
    Clause sorted = clause;
    std::sort(sorted.begin(), sorted.end(), [](Literal a, Literal b) { return a.var < b.var; });
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i].var == sorted[i - 1].var) throw InputError("clause repeats a variable");
    clauses.push_back(std::move(clause));
}

bool clause_satisfied(const Clause& clause, const std::vector<bool>& model) {
    return std::any_of(clause.begin(), clause.end(), [&](Literal l) {
        return model.at(static_cast<std::size_t>(l.var)) == l.positive;
    });
}

Cost WcnfInstance::soft_total() const {
    Cost sum = 0;
    for (const auto& s : soft) sum = saturating_add(sum, s.weight);
    return sum;
}

Cost WcnfInstance::violated_weight(const std::vector<bool>& model) const {
    Cost sum = 0;
    for (const auto& s : soft)
        if (!clause_satisfied(s.clause, model)) sum += s.weight;
    return sum;
}

bool WcnfInstance::satisfies_hard(const std::vector<bool>& model) const {
    if (model.size() < static_cast<std::size_t>(hard.num_vars) + 1) return false;
    return std::all_of(hard.clauses.begin(), hard.clauses.end(),
                       [&](const Clause& c) { return clause_satisfied(c, model); });
}

std::string VarTag::describe(const Admg& g) const {
    switch (kind) {
    case Kind::kLayer0:
        return "x(" + g.label(vertex) + ",0," + std::to_string(slot) + ")";
    case Kind::kLayer:
        return "x(" + g.label(vertex) + "," + std::to_string(layer) + "," + std::to_string(slot) + "," +
               std::to_string(district) + ")";
    case Kind::kSelector:
        return "z(" + std::to_string(slot) + "," + std::to_string(district) + ")";
    }
    return {};
}

int VarMap::add(const VarTag& tag) {
    auto [it, inserted] = ids_.emplace(tag, size() + 1);
    if (!inserted) throw InputError("variable tag registered twice");
    tags_.push_back(tag);
    return it->second;
}

std::optional<int> VarMap::find(const VarTag& tag) const {
    auto it = ids_.find(tag);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

int VarMap::at(const VarTag& tag) const {
    if (auto id = find(tag)) return *id;
    throw InputError("unknown variable tag");
}

}  // namespace mcid
