#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ck {

// Node indices are dense 0..d-1 within one graph.
using NodeIndex = int;

// Mark of an edge between the canonical pair (a, b) with a < b.
enum class EdgeMark : std::uint8_t { Undirected, DirectedForward, DirectedBackward };

struct Edge {
    NodeIndex a;
    NodeIndex b;
    EdgeMark mark;

    friend bool operator==(const Edge&, const Edge&) = default;
};

using NodePair = std::pair<NodeIndex, NodeIndex>;

// Unshielded triple (x, y, z): y is the middle node, stored with x < z.
struct Triple {
    NodeIndex x;
    NodeIndex y;
    NodeIndex z;

    static Triple make(NodeIndex x, NodeIndex y, NodeIndex z) {
        return x < z ? Triple{x, y, z} : Triple{z, y, x};
    }

    friend auto operator<=>(const Triple&, const Triple&) = default;
};

inline NodePair canonical_pair(NodeIndex a, NodeIndex b) {
    return a < b ? NodePair{a, b} : NodePair{b, a};
}

/// A conditional-independence statement (x, y | s). Always held in canonical
/// form: x < y and s sorted without duplicates, so (x,y,S) and (y,x,S') with
/// S' a permutation of S compare equal.
struct CITuple {
    NodeIndex x = 0;
    NodeIndex y = 1;
    std::vector<NodeIndex> s;

    /// Throws std::invalid_argument if x == y or x/y appear in s.
    static CITuple make(NodeIndex x, NodeIndex y, std::vector<NodeIndex> s = {});

    friend auto operator<=>(const CITuple&, const CITuple&) = default;
    friend bool operator==(const CITuple&, const CITuple&) = default;
};

/// Adjacency structure with per-pair marks, conflict flags on edges and
/// ambiguity flags on unshielded triples. Value type: copy to modify.
class MixedGraph {
public:
    MixedGraph() = default;
    explicit MixedGraph(std::vector<std::string> names);

    static MixedGraph complete(std::vector<std::string> names);

    int size() const noexcept { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& names() const noexcept { return names_; }
    const std::string& name(NodeIndex i) const { return names_.at(i); }
    std::optional<NodeIndex> find(std::string_view name) const;
    NodeIndex index_of(std::string_view name) const;

    bool adjacent(NodeIndex a, NodeIndex b) const { return cell(a, b) != Link::None; }
    bool has_arrow(NodeIndex from, NodeIndex to) const { return cell(from, to) == Link::Out; }
    bool is_undirected(NodeIndex a, NodeIndex b) const { return cell(a, b) == Link::Undirected; }
    // Mark read from the lower index to the higher one, whatever the argument order.
    std::optional<EdgeMark> mark(NodeIndex a, NodeIndex b) const;

    void add_undirected(NodeIndex a, NodeIndex b);
    void add_directed(NodeIndex from, NodeIndex to);
    // Sets the orientation of an existing edge.
    void orient(NodeIndex from, NodeIndex to);
    void make_undirected(NodeIndex a, NodeIndex b);
    void remove_edge(NodeIndex a, NodeIndex b);

    std::vector<NodeIndex> adjacents(NodeIndex a) const;
    std::vector<NodeIndex> parents(NodeIndex a) const;
    std::vector<NodeIndex> children(NodeIndex a) const;
    std::vector<NodeIndex> undirected_neighbors(NodeIndex a) const;
    std::vector<Edge> edges() const;
    int edge_count() const;
    int undirected_count() const;

    void flag_conflict(NodeIndex a, NodeIndex b);
    bool is_conflicted(NodeIndex a, NodeIndex b) const {
        return conflicts_.contains(canonical_pair(a, b));
    }
    const std::set<NodePair>& conflicts() const noexcept { return conflicts_; }
    void clear_conflicts() { conflicts_.clear(); }

    // Throws std::invalid_argument unless the triple is unshielded.
    void mark_ambiguous(const Triple& t);
    bool is_ambiguous(const Triple& t) const { return ambiguous_.contains(Triple::make(t.x, t.y, t.z)); }
    const std::set<Triple>& ambiguous_triples() const noexcept { return ambiguous_; }
    void clear_ambiguities() { ambiguous_.clear(); }

    bool has_flags() const noexcept { return !conflicts_.empty() || !ambiguous_.empty(); }
    bool has_directed_cycle() const;
    // No undirected edge and no directed cycle.
    bool is_dag() const { return undirected_count() == 0 && !has_directed_cycle(); }

    // Same nodes and edge marks; ignores flags.
    bool same_marks(const MixedGraph& other) const;
    bool same_skeleton(const MixedGraph& other) const;

    friend bool operator==(const MixedGraph&, const MixedGraph&) = default;

private:
    // Link as seen from the row node: Out means row -> column.
    enum class Link : std::uint8_t { None, Undirected, Out, In };

    Link cell(NodeIndex a, NodeIndex b) const { return cells_[idx(a, b)]; }
    std::size_t idx(NodeIndex a, NodeIndex b) const {
        return static_cast<std::size_t>(a) * names_.size() + static_cast<std::size_t>(b);
    }
    void check_pair(NodeIndex a, NodeIndex b) const;
    void set(NodeIndex a, NodeIndex b, Link ab);

    std::vector<std::string> names_;
    std::vector<Link> cells_;
    std::set<NodePair> conflicts_;
    std::set<Triple> ambiguous_;
};

std::string to_string(const CITuple& t, const MixedGraph& g);
std::string to_string(const CITuple& t, const std::vector<std::string>& names);

}  // namespace ck
