#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "mcid/hedge.hpp"
#include "mcid/solvers.hpp"

namespace mcid {

/// −(number of hedges for s in g[V \ i]).
std::int64_t f_s(const Admg& g, const VertexSet& s, const VertexSet& i);

/// Exact num/den with den > 0.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    friend bool operator==(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num) * b.den == static_cast<__int128>(b.num) * a.den;
    }
    friend bool operator<(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }
    [[nodiscard]] double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// f_S(I) − C(I) / (1 + Σ_{v ∈ V\S} C(v)) over subsets of the finite-cost vertices of V \ S.
/// The hedge list is enumerated once; f_S(I) counts the hedges disjoint from I.
class SubmodularObjective {
public:
    SubmodularObjective(const Admg& g, VertexSet s, CostMap costs);

    [[nodiscard]] std::int64_t f(const VertexSet& i) const;
    [[nodiscard]] Rational eval(const VertexSet& i) const;
    [[nodiscard]] std::int64_t denominator() const { return denom_; }
    [[nodiscard]] const VertexSet& domain() const { return domain_; }
    [[nodiscard]] const std::vector<VertexSet>& hedges() const { return hedges_; }

    /// All maximisers over 2^domain; the domain may hold at most 20 vertices.
    [[nodiscard]] std::vector<VertexSet> maximizers() const;

private:
    const Admg& g_;
    VertexSet s_;
    CostMap costs_;
    VertexSet domain_;
    std::int64_t denom_ = 1;
    std::vector<VertexSet> hedges_;
};

struct SubmodularityReport {
    bool holds = true;
    std::size_t triples = 0;
    // First violating (A, B, v), if any.
    std::optional<std::tuple<VertexSet, VertexSet, Vertex>> counterexample;
};

/// Samples A ⊆ B ⊆ V \ s \ {v} and checks f(A ∪ {v}) − f(A) ≥ f(B ∪ {v}) − f(B).
SubmodularityReport check_submodularity(const Admg& g, const VertexSet& s, std::size_t trials, std::uint64_t seed);
/// Every triple; V \ s may hold at most 10 vertices.
SubmodularityReport check_submodularity_exhaustive(const Admg& g, const VertexSet& s);

struct MdpState {
    VertexSet hull;
    VertexSet removed;
    Cost accumulated_reward = 0;  // −C(removed)

    bool operator==(const MdpState&) const = default;
};

struct StepResult {
    MdpState state;
    Cost reward = 0;
    bool terminal = false;
};

/// States are hedge hulls of the remaining graph; an action deletes one vertex of hull \ s
/// with finite cost and earns −C(a). The episode ends when the hull equals s.
class HedgeEnvironment {
public:
    HedgeEnvironment(const Admg& g, VertexSet s, CostMap costs);

    const MdpState& reset();
    StepResult step(Vertex action);

    [[nodiscard]] const MdpState& state() const { return state_; }
    [[nodiscard]] bool terminal() const { return state_.hull.size() == s_.size(); }
    [[nodiscard]] VertexSet legal_actions() const;
    [[nodiscard]] const VertexSet& district() const { return s_; }
    [[nodiscard]] const CostMap& costs() const { return costs_; }
    /// Hull size after removing `a` from the current state, without stepping.
    [[nodiscard]] std::size_t hull_size_after(Vertex a) const;

private:
    const Admg& g_;
    VertexSet s_;
    CostMap costs_;
    MdpState state_;
};

enum class Policy { kGreedyCost, kGreedyRatio, kRandom };

struct TrajectoryStep {
    std::size_t hull_size = 0;  // before the action
    Vertex action = -1;
    Cost reward = 0;
};

struct RolloutResult {
    SolveReport report;
    std::vector<TrajectoryStep> steps;
    Cost total_reward = 0;
};

/// Runs one episode to termination. Throws InfeasibleError if the hull cannot be emptied.
RolloutResult rollout(const Admg& g, const VertexSet& s, const CostMap& costs, Policy policy, std::uint64_t seed = 0);

/// One line per step: "<hull size> <action label> <reward>".
void write_trajectory(std::ostream& out, const Admg& g, const std::vector<TrajectoryStep>& steps);

Policy parse_policy(std::string_view name);

}  // namespace mcid
