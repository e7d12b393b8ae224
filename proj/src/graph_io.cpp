#include "coherencykit/graph_io.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

#include "coherencykit/errors.hpp"

namespace ck {
namespace {

const char* mark_symbol(EdgeMark m) {
    switch (m) {
        case EdgeMark::Undirected: return "--";
        case EdgeMark::DirectedForward: return "->";
        case EdgeMark::DirectedBackward: return "<-";
    }
    return "--";
}

std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    for (std::string tok; in >> tok;) out.push_back(tok);
    return out;
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

nlohmann::json graph_to_json(const MixedGraph& g) {
    nlohmann::json j;
    j["nodes"] = g.names();
    j["edges"] = nlohmann::json::array();
    for (const Edge& e : g.edges())
        j["edges"].push_back({{"a", g.name(e.a)}, {"b", g.name(e.b)}, {"mark", mark_symbol(e.mark)}});
    j["conflicts"] = nlohmann::json::array();
    for (auto [a, b] : g.conflicts()) j["conflicts"].push_back({g.name(a), g.name(b)});
    j["ambiguous"] = nlohmann::json::array();
    for (const Triple& t : g.ambiguous_triples()) j["ambiguous"].push_back({g.name(t.x), g.name(t.y), g.name(t.z)});
    return j;
}

MixedGraph graph_from_json(const nlohmann::json& j) {
    try {
        MixedGraph g(j.at("nodes").get<std::vector<std::string>>());
        for (const auto& e : j.value("edges", nlohmann::json::array())) {
            NodeIndex a = g.index_of(e.at("a").get<std::string>());
            NodeIndex b = g.index_of(e.at("b").get<std::string>());
            const std::string mark = e.value("mark", std::string("--"));
            if (mark == "--") g.add_undirected(a, b);
            else if (mark == "->") g.add_directed(a, b);
            else if (mark == "<-") g.add_directed(b, a);
            else throw ParseError("unknown edge mark '" + mark + "'", 0);
        }
        for (const auto& c : j.value("conflicts", nlohmann::json::array()))
            g.flag_conflict(g.index_of(c.at(0).get<std::string>()), g.index_of(c.at(1).get<std::string>()));
        for (const auto& t : j.value("ambiguous", nlohmann::json::array()))
            g.mark_ambiguous({g.index_of(t.at(0).get<std::string>()), g.index_of(t.at(1).get<std::string>()),
                              g.index_of(t.at(2).get<std::string>())});
        return g;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {
        throw ParseError(std::string("invalid graph JSON: ") + e.what(), 0);
    }
}

nlohmann::json tuple_to_json(const CITuple& t, const std::vector<std::string>& names) {
    nlohmann::json s = nlohmann::json::array();
    for (NodeIndex v : t.s) s.push_back(names.at(v));
    return {{"x", names.at(t.x)}, {"y", names.at(t.y)}, {"s", s}};
}

MixedGraph parse_edge_list(std::string_view text) {
    struct Stmt {
        int line;
        std::vector<std::string> words;
        std::string kind;  // "->", "<-", "--", "conflict", "ambiguous"
    };
    std::vector<std::string> names;
    auto declare = [&](const std::string& n) {
        if (std::find(names.begin(), names.end(), n) == names.end()) names.push_back(n);
    };
    std::vector<Stmt> stmts;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        std::string_view line = trim(raw);
        if (line.empty()) continue;

        auto keyword = [&](std::string_view kw) -> std::optional<std::vector<std::string>> {
            if (line.substr(0, kw.size()) != kw) return std::nullopt;
            return split_ws(line.substr(kw.size()));
        };
        if (auto w = keyword("nodes:")) {
            if (w->empty()) throw ParseError("empty node declaration", line_no);
            for (const auto& n : *w) declare(n);
            continue;
        }
        if (auto w = keyword("conflict:")) {
            if (w->size() != 2) throw ParseError("conflict needs exactly two nodes", line_no);
            stmts.push_back({line_no, *w, "conflict"});
            continue;
        }
        if (auto w = keyword("ambiguous:")) {
            if (w->size() != 3) throw ParseError("ambiguous needs exactly three nodes", line_no);
            stmts.push_back({line_no, *w, "ambiguous"});
            continue;
        }
        std::vector<std::string> w = split_ws(line);
        if (w.size() != 3 || (w[1] != "->" && w[1] != "<-" && w[1] != "--"))
            throw ParseError("expected 'A -> B', 'A <- B' or 'A -- B', got '" + std::string(line) + "'", line_no);
        if (w[0] == w[2]) throw ParseError("self-loop on '" + w[0] + "'", line_no);
        declare(w[0]);
        declare(w[2]);
        stmts.push_back({line_no, {w[0], w[2]}, w[1]});
    }

    MixedGraph g(names);
    for (const Stmt& s : stmts) {
        try {
            if (s.kind == "conflict") {
                g.flag_conflict(g.index_of(s.words[0]), g.index_of(s.words[1]));
            } else if (s.kind == "ambiguous") {
                g.mark_ambiguous({g.index_of(s.words[0]), g.index_of(s.words[1]), g.index_of(s.words[2])});
            } else {
                NodeIndex a = g.index_of(s.words[0]);
                NodeIndex b = g.index_of(s.words[1]);
                if (g.adjacent(a, b)) throw ParseError("duplicate edge " + s.words[0] + " " + s.words[1], s.line);
                if (s.kind == "->") g.add_directed(a, b);
                else if (s.kind == "<-") g.add_directed(b, a);
                else g.add_undirected(a, b);
            }
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception& e) {
            throw ParseError(e.what(), s.line);
        }
    }
    return g;
}

MixedGraph read_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open graph file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
        try {
            return graph_from_json(nlohmann::json::parse(buf.str()));
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(std::string("invalid JSON: ") + e.what(), 0);
        }
    }
    return parse_edge_list(buf.str());
}

std::string format_edge_list(const MixedGraph& g) {
    std::string out = "nodes:";
    for (const auto& n : g.names()) out += " " + n;
    out += "\n";
    for (const Edge& e : g.edges()) out += g.name(e.a) + " " + mark_symbol(e.mark) + " " + g.name(e.b) + "\n";
    for (auto [a, b] : g.conflicts()) out += "conflict: " + g.name(a) + " " + g.name(b) + "\n";
    for (const Triple& t : g.ambiguous_triples())
        out += "ambiguous: " + g.name(t.x) + " " + g.name(t.y) + " " + g.name(t.z) + "\n";
    return out;
}

CITuple parse_query(std::string_view line, const MixedGraph& g, int line_no) {
    std::string_view lhs = line, rhs;
    if (auto bar = line.find('|'); bar != std::string_view::npos) {
        lhs = line.substr(0, bar);
        rhs = line.substr(bar + 1);
    }
    std::vector<std::string> xy = split_ws(lhs);
    if (xy.size() != 2) throw ParseError("query needs two nodes before '|'", line_no);
    auto lookup = [&](const std::string& n) {
        auto i = g.find(n);
        if (!i) throw ParseError("unknown node '" + n + "'", line_no);
        return *i;
    };
    std::vector<NodeIndex> s;
    for (const auto& n : split_ws(rhs)) s.push_back(lookup(n));
    try {
        return CITuple::make(lookup(xy[0]), lookup(xy[1]), s);
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), line_no);
    }
}

}  // namespace ck
