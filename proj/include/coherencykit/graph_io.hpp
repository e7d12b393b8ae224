#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "coherencykit/graph.hpp"

namespace ck {

// {nodes:[names], edges:[{a,b,mark}], conflicts:[[a,b]], ambiguous:[[x,y,z]]}
// with nodes referenced by name and mark one of "--", "->", "<-".
nlohmann::json graph_to_json(const MixedGraph& g);
MixedGraph graph_from_json(const nlohmann::json& j);

nlohmann::json tuple_to_json(const CITuple& t, const std::vector<std::string>& names);

/// Line-oriented edge list. One statement per line, `#` starts a comment:
///
///     nodes: A B C        declares nodes (fixes their order, allows isolated ones)
///     A -> B              directed edge
///     A <- B              directed edge B -> A
///     A -- B              undirected edge
///     conflict: A B       conflict flag on an existing edge
///     ambiguous: X Y Z    ambiguity flag on the unshielded triple X - Y - Z
///
/// Undeclared nodes are appended in order of first appearance.
/// Throws ParseError carrying the 1-based line number.
MixedGraph parse_edge_list(std::string_view text);
MixedGraph read_edge_list_file(const std::string& path);
std::string format_edge_list(const MixedGraph& g);

// Query line `X Y | S1 S2 ...`; the bar and the set may be omitted.
CITuple parse_query(std::string_view line, const MixedGraph& g, int line_no = 0);

}  // namespace ck
