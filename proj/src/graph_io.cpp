#include "mcid/graph_io.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <vector>

namespace mcid {
namespace {

[[noreturn]] void fail(int line, const std::string& what) {
    throw InputError("line " + std::to_string(line) + ": " + what);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string tok; in >> tok;) out.push_back(tok);
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

Cost parse_cost(const std::string& tok, Cost scale, int line) {
    if (tok == "inf" || tok == "INF" || tok == "infinity") return kInfiniteCost;
    try {
        std::size_t used = 0;
        if (tok.find_first_of(".eE") == std::string::npos) {
            long long v = std::stoll(tok, &used);
            if (used != tok.size() || v < 0) fail(line, "invalid cost '" + tok + "'");
            return static_cast<Cost>(v) * scale;
        }
        double v = std::stod(tok, &used);
        if (used != tok.size() || !(v >= 0) || !std::isfinite(v)) fail(line, "invalid cost '" + tok + "'");
        return static_cast<Cost>(std::llround(v * static_cast<double>(scale)));
    } catch (const std::logic_error&) {
        fail(line, "invalid cost '" + tok + "'");
    }
}

// Reachability along directed edges added so far, used to reject cycles at the offending line.
bool reaches(const std::vector<std::vector<int>>& out, int from, int to) {
    std::vector<char> seen(out.size(), 0);
    std::vector<int> stack{from};
    seen[static_cast<std::size_t>(from)] = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (v == to) return true;
        for (int c : out[static_cast<std::size_t>(v)])
            if (!seen[static_cast<std::size_t>(c)]) {
                seen[static_cast<std::size_t>(c)] = 1;
                stack.push_back(c);
            }
    }
    return false;
}

}  // namespace

GraphFile parse_graph(std::istream& in, const ParseOptions& options) {
    if (options.cost_scale <= 0) throw InputError("cost scale must be positive");
    std::vector<std::string> labels;
    std::unordered_map<std::string, int> index;
    std::vector<std::pair<int, Cost>> cost_lines;
    std::vector<VertexPair> directed, bidirected;
    std::set<VertexPair> seen_dir, seen_bid;
    std::vector<std::vector<int>> out_edges;
    std::vector<int> x, y;

    auto lookup = [&](const std::string& label, int line) {
        auto it = index.find(label);
        if (it == index.end()) fail(line, "unknown vertex '" + label + "'");
        return it->second;
    };

    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const std::string text = trim(raw);
        if (text.empty()) continue;

        auto colon = text.find(':');
        if (colon != std::string::npos) {
            const std::string key = trim(text.substr(0, colon));
            const auto items = split_ws(text.substr(colon + 1));
            if (key == "nodes") {
                for (const auto& label : items) {
                    if (!index.emplace(label, static_cast<int>(labels.size())).second)
                        fail(line, "duplicate vertex '" + label + "'");
                    if (label.rfind(kLatentPrefix, 0) == 0) fail(line, "label prefix 'u:' is reserved");
                    labels.push_back(label);
                    out_edges.emplace_back();
                }
                continue;
            }
            if (key == "X" || key == "Y") {
                auto& target = key == "X" ? x : y;
                for (const auto& label : items) target.push_back(lookup(label, line));
                continue;
            }
            fail(line, "unknown directive '" + key + "'");
        }

        const auto tok = split_ws(text);
        if (tok.size() == 3 && tok[0] == "cost") {
            cost_lines.emplace_back(lookup(tok[1], line), parse_cost(tok[2], options.cost_scale, line));
            continue;
        }
        if (tok.size() == 3 && (tok[1] == "->" || tok[1] == "<->")) {
            int a = lookup(tok[0], line);
            int b = lookup(tok[2], line);
            if (a == b) fail(line, "self-loop on '" + tok[0] + "'");
            if (tok[1] == "->") {
                if (!seen_dir.insert({a, b}).second) fail(line, "duplicate edge " + tok[0] + " -> " + tok[2]);
                if (reaches(out_edges, b, a)) fail(line, "edge " + tok[0] + " -> " + tok[2] + " creates a cycle");
                out_edges[static_cast<std::size_t>(a)].push_back(b);
                directed.emplace_back(a, b);
            } else {
                VertexPair key{std::min(a, b), std::max(a, b)};
                if (!seen_bid.insert(key).second) fail(line, "duplicate edge " + tok[0] + " <-> " + tok[2]);
                bidirected.push_back(key);
            }
            continue;
        }
        fail(line, "cannot parse '" + text + "'");
    }

    GraphFile file;
    const auto n = labels.size();
    file.graph = Admg(std::move(labels), std::move(directed), std::move(bidirected));
    file.costs = CostMap(n, 1);
    for (auto [v, c] : cost_lines) file.costs.set(v, c);
    file.x = make_set(x);
    file.y = make_set(y);
    if (file.x.size() != x.size() || file.y.size() != y.size()) throw InputError("duplicate vertex in query");
    if (!disjoint(file.x, file.y)) throw InputError("X and Y must be disjoint");
    return file;
}

GraphFile parse_graph_string(const std::string& text, const ParseOptions& options) {
    std::istringstream in(text);
    return parse_graph(in, options);
}

GraphFile load_graph_file(const std::string& path, const ParseOptions& options) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open graph file '" + path + "'");
    return parse_graph(in, options);
}

void write_graph(std::ostream& out, const GraphFile& file) {
    const Admg& g = file.graph;
    out << "nodes:";
    for (const auto& l : g.labels()) out << ' ' << l;
    out << '\n';
    for (Vertex v = 0; v < g.size(); ++v) {
        if (v >= static_cast<Vertex>(file.costs.size())) break;
        Cost c = file.costs[v];
        if (c == 1) continue;
        out << "cost " << g.label(v) << ' ';
        if (c == kInfiniteCost) out << "inf"; else out << c;
        out << '\n';
    }
    for (auto [a, b] : g.directed_edges()) out << g.label(a) << " -> " << g.label(b) << '\n';
    for (auto [a, b] : g.bidirected_edges()) out << g.label(a) << " <-> " << g.label(b) << '\n';
    if (!file.x.empty()) {
        out << "X:";
        for (Vertex v : file.x) out << ' ' << g.label(v);
        out << '\n';
    }
    if (!file.y.empty()) {
        out << "Y:";
        for (Vertex v : file.y) out << ' ' << g.label(v);
        out << '\n';
    }
}

std::string format_set(const Admg& g, const VertexSet& set) {
    std::string out = "{";
    for (std::size_t i = 0; i < set.size(); ++i) {
        if (i) out += ",";
        out += g.label(set[i]);
    }
    return out + "}";
}

}  // namespace mcid
