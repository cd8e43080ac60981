#include "mcid/sat_reference.hpp"

#include <algorithm>
#include <set>

namespace mcid::sat {

Engine::Engine(const CnfFormula& formula)
    : num_vars_(formula.num_vars),
      watches_(static_cast<std::size_t>(2 * formula.num_vars + 2)),
      values_(static_cast<std::size_t>(formula.num_vars + 1), -1) {
    std::vector<Literal> units;
    for (const auto& c : formula.clauses) {
        if (c.empty()) {
            consistent_ = false;
            return;
        }
        if (c.size() == 1) {
            units.push_back(c.front());
            continue;
        }
        const int id = static_cast<int>(clauses_.size());
        clauses_.push_back(c);
        watches_[index(c[0])].push_back(id);
        watches_[index(c[1])].push_back(id);
    }
    for (Literal u : units) {
        if (!assign(u)) {
            consistent_ = false;
            return;
        }
    }
}

int Engine::value(Literal l) const {
    const int v = values_[static_cast<std::size_t>(l.var)];
    if (v < 0) return -1;
    return (v == 1) == l.positive ? 1 : 0;
}

bool Engine::assign(Literal l) {
    const int v = value(l);
    if (v == 1) return true;
    if (v == 0) return false;
    values_[static_cast<std::size_t>(l.var)] = l.positive ? 1 : 0;
    trail_.push_back(l);
    return propagate();
}

void Engine::backtrack(std::size_t mark) {
    while (trail_.size() > mark) {
        values_[static_cast<std::size_t>(trail_.back().var)] = -1;
        trail_.pop_back();
    }
    queue_head_ = std::min(queue_head_, mark);
}

bool Engine::propagate() {
    while (queue_head_ < trail_.size()) {
        const Literal falsified = ~trail_[queue_head_++];
        auto& watching = watches_[index(falsified)];
        std::size_t keep = 0;
        bool conflict = false;
        for (std::size_t w = 0; w < watching.size(); ++w) {
            const int id = watching[w];
            if (conflict) {
                watching[keep++] = id;
                continue;
            }
            Clause& c = clauses_[static_cast<std::size_t>(id)];
            if (c[0] == falsified) std::swap(c[0], c[1]);
            if (value(c[0]) == 1) {
                watching[keep++] = id;
                continue;
            }
            bool moved = false;
            for (std::size_t k = 2; k < c.size(); ++k) {
                if (value(c[k]) != 0) {
                    std::swap(c[1], c[k]);
                    watches_[index(c[1])].push_back(id);
                    moved = true;
                    break;
                }
            }
            if (moved) continue;
            watching[keep++] = id;
            if (value(c[0]) == 0) {
                conflict = true;
            } else {
                values_[static_cast<std::size_t>(c[0].var)] = c[0].positive ? 1 : 0;
                trail_.push_back(c[0]);
            }
        }
        watching.resize(keep);
        if (conflict) return false;
    }
    return true;
}

bool Engine::search(const Deadline& deadline) {
    deadline.check();
    int var = 0;
    for (int v = 1; v <= num_vars_; ++v) {
        if (values_[static_cast<std::size_t>(v)] < 0) {
            var = v;
            break;
        }
    }
    if (var == 0) return true;
    for (bool positive : {false, true}) {
        const std::size_t m = mark();
        if (assign({var, positive}) && search(deadline)) return true;
        backtrack(m);
    }
    return false;
}

std::optional<std::vector<bool>> Engine::complete(const Deadline& deadline) {
    if (!consistent_) return std::nullopt;
    const std::size_t m = mark();
    std::optional<std::vector<bool>> model;
    if (search(deadline)) {
        model.emplace(static_cast<std::size_t>(num_vars_ + 1), false);
        for (int v = 1; v <= num_vars_; ++v) (*model)[static_cast<std::size_t>(v)] = values_[static_cast<std::size_t>(v)] == 1;
    }
    backtrack(m);
    return model;
}

std::optional<std::vector<bool>> solve(const CnfFormula& formula, const Deadline& deadline) {
    Engine engine(formula);
    return engine.complete(deadline);
}

namespace {

struct ProjectedSearch {
    Engine& engine;
    const std::vector<int>& projected;
    std::size_t cap;
    const Deadline& deadline;
    std::vector<std::vector<bool>> found;

    void run(std::size_t pos) {
        deadline.check();
        if (pos == projected.size()) {
            if (!engine.complete(deadline)) return;
            std::vector<bool> bits(projected.size());
            for (std::size_t i = 0; i < projected.size(); ++i) bits[i] = engine.value(projected[i]) == 1;
            found.push_back(std::move(bits));
            if (found.size() > cap) throw ResourceError("more than " + std::to_string(cap) + " projected models");
            return;
        }
        const int var = projected[pos];
        if (engine.value(var) >= 0) {
            run(pos + 1);
            return;
        }
        for (bool positive : {false, true}) {
            const std::size_t m = engine.mark();
            if (engine.assign({var, positive})) run(pos + 1);
            engine.backtrack(m);
        }
    }
};

struct MaxSatSearch {
    const WcnfInstance& instance;
    Engine& engine;
    const Deadline& deadline;
    std::vector<int> order;
    std::vector<bool> prefer_positive;  // by variable
    MaxSatResult best;

    [[nodiscard]] Cost falsified_weight() const {
        Cost sum = 0;
        for (const auto& s : instance.soft) {
            const bool falsified =
                std::all_of(s.clause.begin(), s.clause.end(), [&](Literal l) { return engine.value(l) == 0; });
            if (falsified) sum = saturating_add(sum, s.weight);
        }
        return sum;
    }

    void run(std::size_t pos) {
        deadline.check();
        ++best.nodes;
        const Cost lb = falsified_weight();
        if (best.satisfiable && lb >= best.cost) return;
        while (pos < order.size() && engine.value(order[pos]) >= 0) ++pos;
        if (pos == order.size()) {
            auto model = engine.complete(deadline);
            if (!model) return;
            best.satisfiable = true;
            best.cost = lb;
            best.model = std::move(*model);
            return;
        }
        const int var = order[pos];
        const bool first = prefer_positive[static_cast<std::size_t>(var)];
        for (bool positive : {first, !first}) {
            const std::size_t m = engine.mark();
            if (engine.assign({var, positive})) run(pos + 1);
            engine.backtrack(m);
        }
    }
};

}  // namespace

std::vector<std::vector<bool>> enumerate_projected(const CnfFormula& formula, const std::vector<int>& projected,
                                                   std::size_t cap, const Deadline& deadline) {
    for (int v : projected)
        if (v < 1 || v > formula.num_vars) throw InputError("projection variable out of range");
    Engine engine(formula);
    if (!engine.consistent()) return {};
    ProjectedSearch search{engine, projected, cap, deadline, {}};
    search.run(0);
    std::sort(search.found.begin(), search.found.end());
    search.found.erase(std::unique(search.found.begin(), search.found.end()), search.found.end());
    return search.found;
}

MaxSatResult solve_maxsat(const WcnfInstance& instance, const Deadline& deadline) {
    Engine engine(instance.hard);
    if (!engine.consistent()) return {};
    for (const auto& s : instance.soft)
        for (Literal l : s.clause)
            if (l.var < 1 || l.var > instance.hard.num_vars) throw InputError("soft clause references unknown variable");

    MaxSatSearch search{instance, engine, deadline, {}, std::vector<bool>(static_cast<std::size_t>(instance.hard.num_vars + 1), false), {}};
    std::set<int> seen;
    for (const auto& s : instance.soft) {
        for (Literal l : s.clause) {
            if (!seen.insert(l.var).second) continue;
            search.order.push_back(l.var);
            search.prefer_positive[static_cast<std::size_t>(l.var)] = l.positive;
        }
    }
    search.run(0);
    return search.best;
}

}  // namespace mcid::sat
