#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mcid/admg.hpp"

namespace mcid {

struct Literal {
    int var = 0;  // 1-based
    bool positive = true;

    static Literal pos(int v) { return {v, true}; }
    static Literal neg(int v) { return {v, false}; }
    [[nodiscard]] int dimacs() const { return positive ? var : -var; }
    [[nodiscard]] Literal operator~() const { return {var, !positive}; }
    auto operator<=>(const Literal&) const = default;
};

using Clause = std::vector<Literal>;

struct CnfFormula {
    int num_vars = 0;
    std::vector<Clause> clauses;

    /// Appends a clause; rejects unknown variables and repeated literals.
    void add(Clause clause);
};

struct SoftClause {
    Clause clause;
    Cost weight = 1;
};

struct WcnfInstance {
    CnfFormula hard;
    std::vector<SoftClause> soft;
    Cost top = 1;  // strictly greater than the sum of soft weights

    [[nodiscard]] Cost soft_total() const;
    /// Sum of weights of soft clauses falsified by the model (model[0] unused).
    [[nodiscard]] Cost violated_weight(const std::vector<bool>& model) const;
    [[nodiscard]] bool satisfies_hard(const std::vector<bool>& model) const;
};

bool clause_satisfied(const Clause& clause, const std::vector<bool>& model);

/// Meaning of a SAT variable in the intervention encodings.
///   kLayer0:   x(v, 0, slot)        - 0 means v is in intervention set `slot`
///   kLayer:    x(v, layer, slot, district) for layer >= 1
///   kSelector: z(slot, district)    - member `slot` serves `district`
/// The single-district encoding uses slot = district = 0.
struct VarTag {
    enum class Kind { kLayer0, kLayer, kSelector };
    Kind kind = Kind::kLayer0;
    Vertex vertex = -1;
    int layer = 0;
    int slot = 0;
    int district = 0;

    auto operator<=>(const VarTag&) const = default;
    [[nodiscard]] std::string describe(const Admg& g) const;
};

/// Per-district data captured while encoding.
struct DistrictEncoding {
    VertexSet district;
    VertexSet hull;
    VertexSet outside;  // hull \ district
};

/// Bijection between SAT variable ids and tags, plus the structure needed to decode models.
class VarMap {
public:
    int add(const VarTag& tag);
    [[nodiscard]] std::optional<int> find(const VarTag& tag) const;
    [[nodiscard]] int at(const VarTag& tag) const;
    [[nodiscard]] const VarTag& tag(int var) const { return tags_.at(static_cast<std::size_t>(var - 1)); }
    [[nodiscard]] int size() const { return static_cast<int>(tags_.size()); }

    bool multi = false;
    int slots = 1;
    std::vector<DistrictEncoding> districts;
    VertexSet layer0_vertices;  // vertices with x(v,0,·) variables

private:
    std::vector<VarTag> tags_;
    std::map<VarTag, int> ids_;
};

}  // namespace mcid
