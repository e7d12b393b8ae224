#include "coherencykit/graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace ck {

CITuple CITuple::make(NodeIndex x, NodeIndex y, std::vector<NodeIndex> s) {
    if (x == y) throw std::invalid_argument("CITuple: x and y must differ");
    if (x < 0 || y < 0) throw std::invalid_argument("CITuple: negative node index");
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    for (NodeIndex v : s) {
        if (v == x || v == y) throw std::invalid_argument("CITuple: conditioning set contains an endpoint");
        if (v < 0) throw std::invalid_argument("CITuple: negative node index");
    }
    if (x > y) std::swap(x, y);
    return CITuple{x, y, std::move(s)};
}

MixedGraph::MixedGraph(std::vector<std::string> names) : names_(std::move(names)) {
    for (std::size_t i = 0; i < names_.size(); ++i)
        for (std::size_t j = i + 1; j < names_.size(); ++j)
            if (names_[i] == names_[j]) throw std::invalid_argument("duplicate node name '" + names_[i] + "'");
    cells_.assign(names_.size() * names_.size(), Link::None);
}

MixedGraph MixedGraph::complete(std::vector<std::string> names) {
    MixedGraph g(std::move(names));
    for (int a = 0; a < g.size(); ++a)
        for (int b = a + 1; b < g.size(); ++b) g.add_undirected(a, b);
    return g;
}

std::optional<NodeIndex> MixedGraph::find(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return static_cast<NodeIndex>(i);
    return std::nullopt;
}

NodeIndex MixedGraph::index_of(std::string_view name) const {
    auto i = find(name);
    if (!i) throw std::invalid_argument("unknown node '" + std::string(name) + "'");
    return *i;
}

void MixedGraph::check_pair(NodeIndex a, NodeIndex b) const {
    if (a < 0 || b < 0 || a >= size() || b >= size()) throw std::out_of_range("node index out of range");
    if (a == b) throw std::invalid_argument("self-loops are not allowed");
}

void MixedGraph::set(NodeIndex a, NodeIndex b, Link ab) {
    Link ba = ab;
    if (ab == Link::Out) ba = Link::In;
    else if (ab == Link::In) ba = Link::Out;
    cells_[idx(a, b)] = ab;
    cells_[idx(b, a)] = ba;
}

std::optional<EdgeMark> MixedGraph::mark(NodeIndex a, NodeIndex b) const {
    check_pair(a, b);
    auto [lo, hi] = canonical_pair(a, b);
    switch (cell(lo, hi)) {
        case Link::None: return std::nullopt;
        case Link::Undirected: return EdgeMark::Undirected;
        case Link::Out: return EdgeMark::DirectedForward;
        case Link::In: return EdgeMark::DirectedBackward;
    }
    return std::nullopt;
}

void MixedGraph::add_undirected(NodeIndex a, NodeIndex b) {
    check_pair(a, b);
    set(a, b, Link::Undirected);
}

void MixedGraph::add_directed(NodeIndex from, NodeIndex to) {
    check_pair(from, to);
    set(from, to, Link::Out);
}

void MixedGraph::orient(NodeIndex from, NodeIndex to) {
    check_pair(from, to);
    if (!adjacent(from, to)) throw std::invalid_argument("orient: no edge " + names_[from] + " - " + names_[to]);
    set(from, to, Link::Out);
}

void MixedGraph::make_undirected(NodeIndex a, NodeIndex b) {
    check_pair(a, b);
    if (!adjacent(a, b)) throw std::invalid_argument("make_undirected: no edge");
    set(a, b, Link::Undirected);
}

void MixedGraph::remove_edge(NodeIndex a, NodeIndex b) {
    check_pair(a, b);
    set(a, b, Link::None);
    conflicts_.erase(canonical_pair(a, b));
    const NodePair gone = canonical_pair(a, b);
    std::erase_if(ambiguous_, [&](const Triple& t) {
        return canonical_pair(t.x, t.y) == gone || canonical_pair(t.y, t.z) == gone;
    });
}

std::vector<NodeIndex> MixedGraph::adjacents(NodeIndex a) const {
    std::vector<NodeIndex> out;
    for (int b = 0; b < size(); ++b)
        if (b != a && cell(a, b) != Link::None) out.push_back(b);
    return out;
}

std::vector<NodeIndex> MixedGraph::parents(NodeIndex a) const {
    std::vector<NodeIndex> out;
    for (int b = 0; b < size(); ++b)
        if (b != a && cell(a, b) == Link::In) out.push_back(b);
    return out;
}

std::vector<NodeIndex> MixedGraph::children(NodeIndex a) const {
    std::vector<NodeIndex> out;
    for (int b = 0; b < size(); ++b)
        if (b != a && cell(a, b) == Link::Out) out.push_back(b);
    return out;
}

std::vector<NodeIndex> MixedGraph::undirected_neighbors(NodeIndex a) const {
    std::vector<NodeIndex> out;
    for (int b = 0; b < size(); ++b)
        if (b != a && cell(a, b) == Link::Undirected) out.push_back(b);
    return out;
}

std::vector<Edge> MixedGraph::edges() const {
    std::vector<Edge> out;
    for (int a = 0; a < size(); ++a)
        for (int b = a + 1; b < size(); ++b) {
            switch (cell(a, b)) {
                case Link::None: break;
                case Link::Undirected: out.push_back({a, b, EdgeMark::Undirected}); break;
                case Link::Out: out.push_back({a, b, EdgeMark::DirectedForward}); break;
                case Link::In: out.push_back({a, b, EdgeMark::DirectedBackward}); break;
            }
        }
    return out;
}

int MixedGraph::edge_count() const {
    int n = 0;
    for (int a = 0; a < size(); ++a)
        for (int b = a + 1; b < size(); ++b) n += cell(a, b) != Link::None;
    return n;
}

int MixedGraph::undirected_count() const {
    int n = 0;
    for (int a = 0; a < size(); ++a)
        for (int b = a + 1; b < size(); ++b) n += cell(a, b) == Link::Undirected;
    return n;
}

void MixedGraph::flag_conflict(NodeIndex a, NodeIndex b) {
    check_pair(a, b);
    if (!adjacent(a, b)) throw std::invalid_argument("conflict flag on a missing edge");
    conflicts_.insert(canonical_pair(a, b));
}

void MixedGraph::mark_ambiguous(const Triple& t) {
    check_pair(t.x, t.y);
    check_pair(t.y, t.z);
    check_pair(t.x, t.z);
    if (!adjacent(t.x, t.y) || !adjacent(t.y, t.z) || adjacent(t.x, t.z))
        throw std::invalid_argument("ambiguity flag on a triple that is not unshielded");
    ambiguous_.insert(Triple::make(t.x, t.y, t.z));
}

bool MixedGraph::has_directed_cycle() const {
    // Kahn's algorithm over directed edges only.
    const int d = size();
    std::vector<int> indeg(d, 0);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            if (a != b && cell(a, b) == Link::Out) ++indeg[b];
    std::vector<int> stack;
    for (int v = 0; v < d; ++v)
        if (indeg[v] == 0) stack.push_back(v);
    int seen = 0;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        ++seen;
        for (int w = 0; w < d; ++w)
            if (w != v && cell(v, w) == Link::Out && --indeg[w] == 0) stack.push_back(w);
    }
    return seen != d;
}

bool MixedGraph::same_marks(const MixedGraph& other) const {
    return names_ == other.names_ && cells_ == other.cells_;
}

bool MixedGraph::same_skeleton(const MixedGraph& other) const {
    if (size() != other.size()) return false;
    for (int a = 0; a < size(); ++a)
        for (int b = a + 1; b < size(); ++b)
            if (adjacent(a, b) != other.adjacent(a, b)) return false;
    return true;
}

std::string to_string(const CITuple& t, const std::vector<std::string>& names) {
    std::string out = "(" + names.at(t.x) + ", " + names.at(t.y) + ", {";
    for (std::size_t i = 0; i < t.s.size(); ++i) {
        if (i) out += ", ";
        out += names.at(t.s[i]);
    }
    return out + "})";
}

std::string to_string(const CITuple& t, const MixedGraph& g) { return to_string(t, g.names()); }

}  // namespace ck
