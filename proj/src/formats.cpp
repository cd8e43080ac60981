#include "mcid/formats.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace mcid {
namespace {

constexpr std::size_t kTermsPerLine = 8;

std::optional<long long> parse_integer(std::string_view token) {
    long long value = 0;
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) return std::nullopt;
    return value;
}

std::optional<double> parse_real(const std::string& token) {
    try {
        std::size_t used = 0;
        double v = std::stod(token, &used);
        if (used != token.size()) return std::nullopt;
        return v;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    for (std::string t; is >> t;) out.push_back(t);
    return out;
}

void write_clause(std::ostream& out, Cost weight, const Clause& clause) {
    out << weight;
    for (Literal l : clause) out << ' ' << l.dimacs();
    out << " 0\n";
}

void write_terms(std::ostream& out, const std::vector<LinearTerm>& terms, const IlpInstance& ilp) {
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (i > 0 && i % kTermsPerLine == 0) out << "\n   ";
        const Cost c = terms[i].coef;
        if (i == 0)
            out << ' ' << (c < 0 ? "-" : "") << (c < 0 ? -c : c);
        else
            out << ' ' << (c < 0 ? "- " : "+ ") << (c < 0 ? -c : c);
        out << ' ' << ilp.names.at(static_cast<std::size_t>(terms[i].var));
    }
}

const char* sense_text(LinearConstraint::Sense s) {
    switch (s) {
    case LinearConstraint::Sense::kGreaterEqual:
        return ">=";
    case LinearConstraint::Sense::kLessEqual:
        return "<=";
    case LinearConstraint::Sense::kEqual:
        return "=";
    }
    return "";
}

struct ParsedExpression {
    std::vector<std::pair<std::string, Cost>> terms;
    std::optional<LinearConstraint::Sense> sense;
    Cost rhs = 0;
};

ParsedExpression parse_expression(const std::string& text) {
    ParsedExpression e;
    Cost sign = 1;
    std::optional<Cost> coef;
    bool after_sense = false;
    for (const auto& tok : split(text)) {
        if (tok == "+") continue;
        if (tok == "-") {
            sign = -sign;
            continue;
        }
        if (tok == ">=" || tok == "=>" || tok == "<=" || tok == "=<" || tok == "=") {
            if (coef) throw InputError("LP: dangling coefficient before relation");
            e.sense = tok == "=" ? LinearConstraint::Sense::kEqual
                      : tok.front() == '>' || tok.back() == '>' ? LinearConstraint::Sense::kGreaterEqual
                                                                : LinearConstraint::Sense::kLessEqual;
            after_sense = true;
            sign = 1;
            continue;
        }
        if (auto n = parse_integer(tok)) {
            if (after_sense) {
                e.rhs = sign * *n;
                sign = 1;
            } else {
                if (coef) throw InputError("LP: two coefficients in a row");
                coef = sign * *n;
            }
            continue;
        }
        if (after_sense) throw InputError("LP: unexpected token after relation: " + tok);
        e.terms.emplace_back(tok, coef.value_or(sign));
        coef.reset();
        sign = 1;
    }
    if (coef) throw InputError("LP: coefficient without variable");
    return e;
}

}  // namespace

void write_wcnf(std::ostream& out, const WcnfInstance& instance, const VarMap* vars, const Admg* g) {
    if (vars && g)
        for (int v = 1; v <= vars->size(); ++v) out << "c var " << v << ' ' << vars->tag(v).describe(*g) << '\n';
    const std::size_t total = instance.hard.clauses.size() + instance.soft.size();
    out << "p wcnf " << instance.hard.num_vars << ' ' << total << ' ' << instance.top << '\n';
    for (const auto& c : instance.hard.clauses) write_clause(out, instance.top, c);
    for (const auto& s : instance.soft) write_clause(out, s.weight, s.clause);
    if (!out) throw IoError("failed to write WCNF");
}

WcnfInstance read_wcnf(std::istream& in) {
    WcnfInstance w;
    bool header = false;
    std::size_t declared = 0;
    std::vector<long long> pending;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t.front() == 'c') continue;
        const auto tokens = split(t);
        if (tokens.front() == "p") {
            if (header || tokens.size() != 5 || tokens[1] != "wcnf")
                throw InputError("WCNF line " + std::to_string(line_no) + ": bad header");
            auto nv = parse_integer(tokens[2]);
            auto nc = parse_integer(tokens[3]);
            auto top = parse_integer(tokens[4]);
            if (!nv || !nc || !top || *nv < 0 || *nc < 0 || *top < 1)
                throw InputError("WCNF line " + std::to_string(line_no) + ": bad header");
            w.hard.num_vars = static_cast<int>(*nv);
            declared = static_cast<std::size_t>(*nc);
            w.top = *top;
            header = true;
            continue;
        }
        if (!header) throw InputError("WCNF line " + std::to_string(line_no) + ": clause before header");
        for (const auto& tok : tokens) {
            auto n = parse_integer(tok);
            if (!n) throw InputError("WCNF line " + std::to_string(line_no) + ": bad token '" + tok + "'");
            pending.push_back(*n);
            if (*n != 0 || pending.size() == 1) continue;
            const Cost weight = pending.front();
            if (weight < 1) throw InputError("WCNF line " + std::to_string(line_no) + ": weight must be positive");
            Clause clause;
            for (std::size_t i = 1; i + 1 < pending.size(); ++i) {
                const long long lit = pending[i];
                clause.push_back({static_cast<int>(lit < 0 ? -lit : lit), lit > 0});
            }
            pending.clear();
            if (weight >= w.top) {
                w.hard.add(std::move(clause));
            } else {
                for (Literal l : clause)
                    if (l.var < 1 || l.var > w.hard.num_vars) throw InputError("WCNF: soft clause references unknown variable");
                w.soft.push_back({std::move(clause), weight});
            }
        }
    }
    if (!header) throw InputError("WCNF: missing header");
    if (!pending.empty()) throw InputError("WCNF: unterminated clause");
    if (w.hard.clauses.size() + w.soft.size() != declared) throw InputError("WCNF: clause count does not match header");
    return w;
}

void write_lp(std::ostream& out, const IlpInstance& ilp) {
    out << "\\ minimum-cost intervention program\n";
    out << "\\ objective offset: " << ilp.objective_offset << '\n';
    out << "Minimize\n obj:";
    std::vector<LinearTerm> objective;
    for (int j = 0; j < ilp.size(); ++j)
        if (ilp.objective[static_cast<std::size_t>(j)] != 0) objective.push_back({j, ilp.objective[static_cast<std::size_t>(j)]});
    if (objective.empty() && ilp.size() > 0) objective.push_back({0, 0});
    write_terms(out, objective, ilp);
    out << "\nSubject To\n";
    for (const auto& c : ilp.constraints) {
        out << ' ' << c.name << ':';
        write_terms(out, c.terms, ilp);
        out << ' ' << sense_text(c.sense) << ' ' << c.rhs << '\n';
    }
    out << "Binary\n";
    for (int j = 0; j < ilp.size(); ++j) {
        out << ' ' << ilp.names[static_cast<std::size_t>(j)];
        if ((j + 1) % static_cast<int>(kTermsPerLine) == 0 || j + 1 == ilp.size()) out << '\n';
    }
    out << "End\n";
    if (!out) throw IoError("failed to write LP");
}

IlpInstance read_lp(std::istream& in) {
    enum class Section { kNone, kObjective, kConstraints, kBounds, kBinary, kEnd };
    Section section = Section::kNone;
    IlpInstance ilp;
    std::string objective_text;
    std::vector<std::pair<std::string, std::string>> constraint_text;  // name, body
    std::vector<std::string> binaries;

    std::string line;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '\\') {
            const std::string key = "objective offset:";
            if (auto pos = t.find(key); pos != std::string::npos) {
                auto v = parse_integer(trim(t.substr(pos + key.size())));
                if (!v) throw InputError("LP: bad objective offset comment");
                ilp.objective_offset = *v;
            }
            continue;
        }
        const std::string l = lower(t);
        if (l == "minimize" || l == "minimise" || l == "min") {
            section = Section::kObjective;
            continue;
        }
        if (l == "maximize" || l == "maximise" || l == "max") throw InputError("LP: only minimisation is supported");
        if (l == "subject to" || l == "such that" || l == "st" || l == "s.t.") {
            section = Section::kConstraints;
            continue;
        }
        if (l == "bounds") {
            section = Section::kBounds;
            continue;
        }
        if (l == "binary" || l == "binaries" || l == "bin") {
            section = Section::kBinary;
            continue;
        }
        if (l == "end") {
            section = Section::kEnd;
            continue;
        }
        switch (section) {
        case Section::kObjective: {
            const auto colon = t.find(':');
            objective_text += ' ' + (colon == std::string::npos ? t : t.substr(colon + 1));
            break;
        }
        case Section::kConstraints: {
            const auto colon = t.find(':');
            if (colon != std::string::npos) {
                constraint_text.emplace_back(trim(t.substr(0, colon)), t.substr(colon + 1));
            } else {
                if (constraint_text.empty()) throw InputError("LP: constraint without a name");
                constraint_text.back().second += ' ' + t;
            }
            break;
        }
        case Section::kBinary:
            for (auto& name : split(t)) binaries.push_back(name);
            break;
        case Section::kBounds:
            break;
        case Section::kNone:
        case Section::kEnd:
            throw InputError("LP: content outside a section: " + t);
        }
    }

    std::map<std::string, int> index;
    for (const auto& name : binaries) {
        if (!index.emplace(name, ilp.size()).second) throw InputError("LP: duplicate binary variable " + name);
        ilp.add_variable(name);
    }
    auto lookup = [&](const std::string& name) {
        auto it = index.find(name);
        if (it == index.end()) throw InputError("LP: variable " + name + " is not declared binary");
        return it->second;
    };

    const ParsedExpression obj = parse_expression(objective_text);
    if (obj.sense) throw InputError("LP: relation in objective");
    for (const auto& [name, coef] : obj.terms) ilp.objective[static_cast<std::size_t>(lookup(name))] += coef;

    for (const auto& [name, body] : constraint_text) {
        const ParsedExpression e = parse_expression(body);
        if (!e.sense) throw InputError("LP: constraint " + name + " has no relation");
        LinearConstraint c;
        c.name = name;
        c.sense = *e.sense;
        c.rhs = e.rhs;
        for (const auto& [var, coef] : e.terms) c.terms.push_back({lookup(var), coef});
        ilp.constraints.push_back(std::move(c));
    }
    return ilp;
}

MaxSatOutput parse_maxsat_output(const std::string& text, int num_vars) {
    MaxSatOutput out;
    std::istringstream is(text);
    std::string line;
    std::vector<long long> ints;
    std::string bits;
    bool saw_v = false;
    while (std::getline(is, line)) {
        const std::string t = trim(line);
        if (t.size() < 1) continue;
        const auto tokens = split(t);
        if (tokens.front() == "s") {
            const std::string rest = lower(trim(t.substr(1)));
            if (rest.find("unsat") != std::string::npos)
                out.status = SolverStatus::kUnsatisfiable;
            else if (rest.find("optimum") != std::string::npos)
                out.status = SolverStatus::kOptimum;
            else if (rest.find("sat") != std::string::npos)
                out.status = SolverStatus::kSatisfiable;
            else
                out.status = SolverStatus::kUnknown;
        } else if (tokens.front() == "o" && tokens.size() >= 2) {
            if (auto c = parse_integer(tokens[1])) out.reported_cost = *c;
        } else if (tokens.front() == "v") {
            saw_v = true;
            for (std::size_t i = 1; i < tokens.size(); ++i) {
                const auto& tok = tokens[i];
                const bool binary_string =
                    tokens.size() == 2 && tok.size() == static_cast<std::size_t>(num_vars) && tok.size() > 1 &&
                    tok.find_first_not_of("01") == std::string::npos;
                if (binary_string) {
                    bits = tok;
                } else if (auto n = parse_integer(tok)) {
                    ints.push_back(*n);
                } else {
                    throw InputError("solver output: bad model token '" + tok + "'");
                }
            }
        }
    }
    if (!saw_v) return out;
    out.model.assign(static_cast<std::size_t>(num_vars + 1), false);
    if (!bits.empty()) {
        for (int v = 1; v <= num_vars; ++v) out.model[static_cast<std::size_t>(v)] = bits[static_cast<std::size_t>(v - 1)] == '1';
        return out;
    }
    for (long long lit : ints) {
        if (lit == 0) continue;
        const long long var = lit < 0 ? -lit : lit;
        if (var > num_vars) throw InputError("solver output: literal out of range");
        out.model[static_cast<std::size_t>(var)] = lit > 0;
    }
    return out;
}

LpSolution parse_lp_solution(const std::string& text, const IlpInstance& ilp) {
    LpSolution sol;
    const std::string l = lower(text);
    if (l.find("infeasible") != std::string::npos)
        sol.status = SolverStatus::kUnsatisfiable;
    else if (l.find("optimal") != std::string::npos)
        sol.status = SolverStatus::kOptimum;

    std::map<std::string, int> index;
    for (int j = 0; j < ilp.size(); ++j) index.emplace(ilp.names[static_cast<std::size_t>(j)], j);
    std::vector<bool> values(static_cast<std::size_t>(ilp.size()), false);
    bool any = false;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        const auto tokens = split(line);
        for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
            auto it = index.find(tokens[i]);
            if (it == index.end()) continue;
            auto v = parse_real(tokens[i + 1]);
            if (!v) continue;
            values[static_cast<std::size_t>(it->second)] = *v > 0.5;
            any = true;
            break;
        }
    }
    // Some solvers list only non-zero variables.
    if (any || sol.status == SolverStatus::kOptimum) {
        sol.values = std::move(values);
        if (sol.status == SolverStatus::kUnknown) sol.status = SolverStatus::kSatisfiable;
    }
    return sol;
}

}  // namespace mcid
