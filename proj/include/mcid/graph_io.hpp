#pragma once

#include <iosfwd>
#include <string>

#include "mcid/admg.hpp"

namespace mcid {

/// Contents of a graph file: the ADMG, vertex costs and (optionally) a query.
struct GraphFile {
    Admg graph;
    CostMap costs;
    VertexSet x;
    VertexSet y;

    [[nodiscard]] bool has_query() const { return !x.empty() && !y.empty(); }
};

struct ParseOptions {
    // Decimal costs are multiplied by this factor and rounded to the nearest integer.
    Cost cost_scale = 1;
};

/// Line-based format:
///   # comment
///   nodes: a b c
///   cost a 5        (or `cost a inf`; default cost is 1)
///   a -> b
///   a <-> b
///   X: a
///   Y: c
/// Errors carry the 1-based line number.
GraphFile parse_graph(std::istream& in, const ParseOptions& options = {});
GraphFile parse_graph_string(const std::string& text, const ParseOptions& options = {});
GraphFile load_graph_file(const std::string& path, const ParseOptions& options = {});

void write_graph(std::ostream& out, const GraphFile& file);

std::string format_set(const Admg& g, const VertexSet& set);

}  // namespace mcid
