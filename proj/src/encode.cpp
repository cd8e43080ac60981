#include "mcid/encode.hpp"

#include <algorithm>
#include <set>

#include "mcid/sat_reference.hpp"

namespace mcid {
namespace {

using Kind = VarTag::Kind;

struct Edges {
    std::vector<VertexPair> directed;
    std::vector<VertexPair> bidirected;
};

Edges edges_inside(const Admg& g, const VertexSet& hull) {
    const VertexMask in = to_mask(g.size(), hull);
    Edges e;
    for (auto [a, b] : g.directed_edges())
        if (in[static_cast<std::size_t>(a)] && in[static_cast<std::size_t>(b)]) e.directed.emplace_back(a, b);
    for (auto [a, b] : g.bidirected_edges())
        if (in[static_cast<std::size_t>(a)] && in[static_cast<std::size_t>(b)]) e.bidirected.emplace_back(a, b);
    return e;
}

// Emits the layered propagation clauses of one district copy. `layer_var(v, j)` returns the
// variable of v at layer j for v outside the district; district vertices are constant 1
// for j >= 1. `relax` (0 if none) is appended negated to every clause.
template <typename LayerVar>
void emit_copy(CnfFormula& cnf, const Admg& g, const DistrictEncoding& d, LayerVar layer_var, int relax) {
    const int m = static_cast<int>(d.outside.size());
    const VertexMask in_s = to_mask(g.size(), d.district);
    const Edges edges = edges_inside(g, d.hull);
    auto inside = [&](Vertex v) { return in_s[static_cast<std::size_t>(v)] != 0; };

    auto push = [&](Vertex from, Vertex to, int j) {
        if (inside(from)) return;  // x(from, j) == 1 satisfies the clause
        Clause c{Literal::neg(layer_var(from, j - 1)), Literal::pos(layer_var(from, j))};
        if (!inside(to)) c.push_back(Literal::neg(layer_var(to, j)));
        if (relax) c.push_back(Literal::neg(relax));
        cnf.add(std::move(c));
    };

    for (int j = 1; j <= m + 1; ++j) {
        if (j % 2 == 1) {
            for (auto [a, b] : edges.directed) push(a, b, j);
        } else {
            for (auto [a, b] : edges.bidirected) {
                push(a, b, j);
                push(b, a, j);
            }
        }
    }
    for (Vertex v : d.outside) {
        Clause c{Literal::neg(layer_var(v, m + 1))};
        if (relax) c.push_back(Literal::neg(relax));
        cnf.add(std::move(c));
    }
}

DistrictEncoding describe_district(const Admg& g, const VertexSet& s) {
    DistrictEncoding d;
    d.district = s;
    d.hull = hedge_hull(g, s);
    d.outside = set_difference(d.hull, s);
    return d;
}

}  // namespace

Encoding build_cnf_single(const Admg& g, const VertexSet& s) {
    Encoding enc;
    enc.vars.districts.push_back(describe_district(g, s));
    const DistrictEncoding& d = enc.vars.districts.front();
    const int m = static_cast<int>(d.outside.size());
    enc.vars.layer0_vertices = d.outside;

    for (Vertex v : d.outside)
        for (int j = 0; j <= m + 1; ++j)
            enc.vars.add(j == 0 ? VarTag{Kind::kLayer0, v, 0, 0, 0} : VarTag{Kind::kLayer, v, j, 0, 0});
    enc.cnf.num_vars = enc.vars.size();

    const VarMap& vars = enc.vars;
    auto layer_var = [&vars](Vertex v, int j) {
        return vars.at(j == 0 ? VarTag{Kind::kLayer0, v, 0, 0, 0} : VarTag{Kind::kLayer, v, j, 0, 0});
    };
    emit_copy(enc.cnf, g, d, layer_var, 0);
    return enc;
}

Encoding build_cnf_multi(const PreparedQuery& pq) {
    const Admg& g = pq.g;
    const int r = static_cast<int>(pq.districts.size());
    if (r < 1) throw InputError("query has no districts");

    Encoding enc;
    enc.vars.multi = true;
    enc.vars.slots = r;
    VertexSet layer0;
    for (const auto& s : pq.districts) {
        enc.vars.districts.push_back(describe_district(g, s));
        layer0 = set_union(layer0, enc.vars.districts.back().hull);
    }
    enc.vars.layer0_vertices = layer0;

    for (int k = 0; k < r; ++k)
        for (Vertex v : layer0) enc.vars.add({Kind::kLayer0, v, 0, k, 0});
    for (int l = 0; l < r; ++l)
        for (int k = 0; k < r; ++k) enc.vars.add({Kind::kSelector, -1, 0, k, l});
    for (int l = 0; l < r; ++l) {
        const auto& d = enc.vars.districts[static_cast<std::size_t>(l)];
        const int m = static_cast<int>(d.outside.size());
        for (int k = 0; k < r; ++k)
            for (Vertex v : d.outside)
                for (int j = 1; j <= m + 1; ++j) enc.vars.add({Kind::kLayer, v, j, k, l});
    }
    enc.cnf.num_vars = enc.vars.size();

    const VarMap& vars = enc.vars;
    for (int l = 0; l < r; ++l) {
        const auto& d = vars.districts[static_cast<std::size_t>(l)];
        Clause coverage;
        for (int k = 0; k < r; ++k) {
            const int z = vars.at({Kind::kSelector, -1, 0, k, l});
            coverage.push_back(Literal::pos(z));
            // A member serving district l must avoid it.
            for (Vertex v : d.district) enc.cnf.add({Literal::pos(vars.at({Kind::kLayer0, v, 0, k, 0})), Literal::neg(z)});
            auto layer_var = [&vars, k, l](Vertex v, int j) {
                return vars.at(j == 0 ? VarTag{Kind::kLayer0, v, 0, k, 0} : VarTag{Kind::kLayer, v, j, k, l});
            };
            emit_copy(enc.cnf, g, d, layer_var, z);
        }
        enc.cnf.add(std::move(coverage));
    }
    return enc;
}

WcnfInstance attach_soft(const Encoding& encoding, const CostMap& costs, SoftForm form) {
    WcnfInstance w;
    w.hard = encoding.cnf;
    const VarMap& vars = encoding.vars;
    std::set<int> hardened;

    auto charge = [&](Vertex v, int slot, std::optional<int> selector) {
        const int x = vars.at({VarTag::Kind::kLayer0, v, 0, slot, 0});
        const Cost c = costs[v];
        if (c == kInfiniteCost) {
            if (hardened.insert(x).second) w.hard.add({Literal::pos(x)});
            return;
        }
        if (c == 0) return;
        Clause clause{Literal::pos(x)};
        if (selector) clause.push_back(Literal::neg(*selector));
        w.soft.push_back({std::move(clause), c});
    };

    if (!vars.multi) {
        for (Vertex v : vars.districts.front().outside) charge(v, 0, std::nullopt);
    } else if (form == SoftForm::kLiteral) {
        for (int l = 0; l < static_cast<int>(vars.districts.size()); ++l)
            for (Vertex v : vars.districts[static_cast<std::size_t>(l)].outside)
                for (int k = 0; k < vars.slots; ++k)
                    charge(v, k, vars.at({VarTag::Kind::kSelector, -1, 0, k, l}));
    } else {
        for (int k = 0; k < vars.slots; ++k)
            for (Vertex v : vars.layer0_vertices) charge(v, k, std::nullopt);
    }
    w.top = saturating_add(w.soft_total(), 1);
    return w;
}

InterventionFamily decode_model(const CnfFormula& hard, const VarMap& vars, const std::vector<bool>& model,
                                const CostMap& costs) {
    if (model.size() < static_cast<std::size_t>(hard.num_vars) + 1)
        throw VerificationError("model does not assign every variable");
    for (std::size_t c = 0; c < hard.clauses.size(); ++c)
        if (!clause_satisfied(hard.clauses[c], model))
            throw VerificationError("model violates hard clause " + std::to_string(c + 1));

    auto is_zero = [&](Vertex v, int slot) {
        return !model[static_cast<std::size_t>(vars.at({VarTag::Kind::kLayer0, v, 0, slot, 0}))];
    };

    InterventionFamily family;
    if (!vars.multi) {
        VertexSet set;
        for (Vertex v : vars.districts.front().outside)
            if (is_zero(v, 0)) set.push_back(v);
        family.sets.push_back(std::move(set));
        family.serves = {0};
    } else {
        const int r = static_cast<int>(vars.districts.size());
        family.serves.assign(static_cast<std::size_t>(r), -1);
        for (int k = 0; k < vars.slots; ++k) {
            VertexSet relevant;
            std::vector<int> served;
            for (int l = 0; l < r; ++l) {
                if (!model[static_cast<std::size_t>(vars.at({VarTag::Kind::kSelector, -1, 0, k, l}))]) continue;
                served.push_back(l);
                relevant = set_union(relevant, vars.districts[static_cast<std::size_t>(l)].outside);
            }
            if (served.empty()) continue;
            VertexSet set;
            for (Vertex v : relevant)
                if (is_zero(v, k)) set.push_back(v);
            for (int l : served)
                if (family.serves[static_cast<std::size_t>(l)] < 0)
                    family.serves[static_cast<std::size_t>(l)] = static_cast<int>(family.sets.size());
            family.sets.push_back(std::move(set));
        }
    }
    family.total_cost = family_cost(family.sets, costs);
    return family;
}

InterventionFamily decode_model(const WcnfInstance& instance, const VarMap& vars, const std::vector<bool>& model,
                                const CostMap& costs) {
    return decode_model(instance.hard, vars, model, costs);
}

std::vector<ProjectedModel> enumerate_models(const CnfFormula& cnf, const VarMap& vars, std::size_t cap,
                                             const Deadline& deadline) {
    std::vector<int> layer0;
    for (int v = 1; v <= vars.size(); ++v)
        if (vars.tag(v).kind == VarTag::Kind::kLayer0) layer0.push_back(v);
    if (layer0.size() > kProjectedVariableGuard)
        throw ResourceError("too many layer-0 variables to enumerate (" + std::to_string(layer0.size()) + ")");

    const auto projections = sat::enumerate_projected(cnf, layer0, cap, deadline);
    std::vector<ProjectedModel> out;
    out.reserve(projections.size());
    for (const auto& bits : projections) {
        ProjectedModel pm(static_cast<std::size_t>(vars.slots));
        for (std::size_t i = 0; i < layer0.size(); ++i) {
            if (bits[i]) continue;
            const VarTag& t = vars.tag(layer0[i]);
            pm[static_cast<std::size_t>(t.slot)].push_back(t.vertex);
        }
        for (auto& set : pm) set = make_set(std::move(set));
        out.push_back(std::move(pm));
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace mcid
