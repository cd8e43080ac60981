#pragma once

#include <optional>
#include <vector>

#include "mcid/cnf.hpp"
#include "mcid/errors.hpp"
#include "mcid/hedge.hpp"

namespace mcid {

struct Encoding {
    CnfFormula cnf;
    VarMap vars;
};

/// Reachability formula for one district, built over its hedge hull. With m = |hull \ s|,
/// vertex v outside s gets layers x(v,0..m+1); layers alternate directed (odd) and
/// bidirected (even) propagation and the last layer is forced to 0. District vertices are
/// the constant 1 and are folded away. x(v,0) = 0 means "intervene on v".
Encoding build_cnf_single(const Admg& g, const VertexSet& s);

/// Multi-district formula: one copy per (slot k, district l) relaxed by ¬z(k,l), a shared
/// x(v,0,k) layer per slot, and a coverage clause per district.
Encoding build_cnf_multi(const PreparedQuery& pq);

/// How intervention cost is charged in the multi-district instance.
enum class SoftForm {
    // (x(v,0,k) ∨ ¬z(k,l)) with weight C(v) for every district l whose hull contains v.
    kLiteral,
    // unit (x(v,0,k)) with weight C(v) for every slot k; charges each member once.
    kPerSlotUnit,
};

/// Adds cost clauses. Zero-cost vertices get no soft clause; infinite-cost vertices get
/// hard units x(v,0,·) instead.
WcnfInstance attach_soft(const Encoding& encoding, const CostMap& costs, SoftForm form = SoftForm::kPerSlotUnit);

/// Reads the intervention family out of a model (model[0] unused). Throws VerificationError
/// if the model violates a hard clause. Members only keep vertices inside the hulls of the
/// districts they serve.
InterventionFamily decode_model(const CnfFormula& hard, const VarMap& vars, const std::vector<bool>& model,
                                const CostMap& costs);
InterventionFamily decode_model(const WcnfInstance& instance, const VarMap& vars, const std::vector<bool>& model,
                                const CostMap& costs);

/// Satisfying assignments projected to the x(·,0,·) layer: per slot, the vertices set to 0.
using ProjectedModel = std::vector<VertexSet>;

inline constexpr std::size_t kProjectedVariableGuard = 20;

/// All distinct projected models. At most kProjectedVariableGuard layer-0 variables; more than
/// `cap` models raises ResourceError.
std::vector<ProjectedModel> enumerate_models(const CnfFormula& cnf, const VarMap& vars, std::size_t cap,
                                             const Deadline& deadline = {});

}  // namespace mcid
