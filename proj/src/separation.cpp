#include "coherencykit/separation.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <stdexcept>

#include "coherencykit/errors.hpp"

namespace ck {
namespace {

void require_dag(const MixedGraph& g, const char* who) {
    if (g.undirected_count() > 0) throw InvalidGraphError(std::string(who) + ": graph has undirected edges");
    if (g.has_directed_cycle()) throw InvalidGraphError(std::string(who) + ": graph has a directed cycle");
}

void require_unflagged(const MixedGraph& g, const char* who) {
    if (g.has_flags())
        throw UnresolvedGraphError(std::string(who) + ": graph carries conflict or ambiguity flags; resolve it first");
}

void check_tuple(const MixedGraph& g, const CITuple& t) {
    auto in_range = [&](NodeIndex v) { return v >= 0 && v < g.size(); };
    if (!in_range(t.x) || !in_range(t.y) || !std::all_of(t.s.begin(), t.s.end(), in_range))
        throw std::out_of_range("tuple references a node outside the graph");
}

std::vector<char> membership(int d, const std::vector<NodeIndex>& s) {
    std::vector<char> in(d, 0);
    for (NodeIndex v : s) in[v] = 1;
    return in;
}

// Nodes with a directed path into s, s included.
std::vector<char> ancestors_of(const MixedGraph& g, const std::vector<NodeIndex>& s) {
    std::vector<char> anc = membership(g.size(), s);
    std::vector<NodeIndex> stack(s.begin(), s.end());
    while (!stack.empty()) {
        NodeIndex v = stack.back();
        stack.pop_back();
        for (NodeIndex p : g.parents(v))
            if (!anc[p]) {
                anc[p] = 1;
                stack.push_back(p);
            }
    }
    return anc;
}

enum class TripleKind { Collider, NonCollider, Indefinite };

TripleKind classify(const MixedGraph& g, NodeIndex a, NodeIndex b, NodeIndex c) {
    if (g.has_arrow(a, b) && g.has_arrow(c, b)) return TripleKind::Collider;
    if (g.has_arrow(b, a) || g.has_arrow(b, c)) return TripleKind::NonCollider;
    if (g.is_undirected(a, b) && g.is_undirected(b, c) && !g.adjacent(a, c)) return TripleKind::NonCollider;
    return TripleKind::Indefinite;
}

// Depth-first search over simple paths from x. `step(prev, cur, next)` decides
// whether the path may continue through cur; returns true once y is reached.
bool any_simple_path(const MixedGraph& g, NodeIndex x, NodeIndex y,
                     const std::function<bool(NodeIndex, NodeIndex, NodeIndex)>& step) {
    std::vector<char> on_path(g.size(), 0);
    std::function<bool(NodeIndex, NodeIndex)> dfs = [&](NodeIndex prev, NodeIndex cur) -> bool {
        for (NodeIndex next : g.adjacents(cur)) {
            if (on_path[next]) continue;
            if (prev >= 0 && !step(prev, cur, next)) continue;
            if (next == y) return true;
            on_path[next] = 1;
            bool hit = dfs(cur, next);
            on_path[next] = 0;
            if (hit) return true;
        }
        return false;
    };
    on_path[x] = 1;
    return dfs(-1, x);
}

}  // namespace

bool d_separated(const MixedGraph& dag, const CITuple& t) {
    require_dag(dag, "d_separated");
    check_tuple(dag, t);
    const int d = dag.size();
    const std::vector<char> in_s = membership(d, t.s);
    const std::vector<char> anc = ancestors_of(dag, t.s);

    // State: node plus whether we arrived from a child (up) or a parent (down).
    std::vector<char> seen_up(d, 0), seen_down(d, 0);
    std::deque<std::pair<NodeIndex, bool>> queue{{t.x, true}};
    while (!queue.empty()) {
        auto [v, up] = queue.front();
        queue.pop_front();
        if (up ? seen_up[v] : seen_down[v]) continue;
        (up ? seen_up : seen_down)[v] = 1;
        if (v == t.y) return false;
        if (up) {
            if (in_s[v]) continue;
            for (NodeIndex p : dag.parents(v)) queue.emplace_back(p, true);
            for (NodeIndex c : dag.children(v)) queue.emplace_back(c, false);
        } else {
            if (!in_s[v])
                for (NodeIndex c : dag.children(v)) queue.emplace_back(c, false);
            if (anc[v])
                for (NodeIndex p : dag.parents(v)) queue.emplace_back(p, true);
        }
    }
    return true;
}

bool d_separated_by_paths(const MixedGraph& dag, const CITuple& t) {
    require_dag(dag, "d_separated_by_paths");
    check_tuple(dag, t);
    const std::vector<char> in_s = membership(dag.size(), t.s);
    const std::vector<char> anc = ancestors_of(dag, t.s);
    return !any_simple_path(dag, t.x, t.y, [&](NodeIndex a, NodeIndex b, NodeIndex c) {
        bool collider = dag.has_arrow(a, b) && dag.has_arrow(c, b);
        return collider ? anc[b] != 0 : in_s[b] == 0;
    });
}

bool pdag_separated(const MixedGraph& g, const CITuple& t) {
    require_unflagged(g, "pdag_separated");
    check_tuple(g, t);
    const std::vector<char> in_s = membership(g.size(), t.s);
    const std::vector<char> anc = ancestors_of(g, t.s);
    return !any_simple_path(g, t.x, t.y, [&](NodeIndex a, NodeIndex b, NodeIndex c) {
        switch (classify(g, a, b, c)) {
            case TripleKind::Collider: return anc[b] != 0;
            case TripleKind::NonCollider: return in_s[b] == 0;
            case TripleKind::Indefinite: return false;
        }
        return false;
    });
}

int separation_indicator(const MixedGraph& g, const CITuple& t) {
    require_unflagged(g, "separation_indicator");
    if (g.is_dag()) return d_separated(g, t) ? 1 : 0;
    return pdag_separated(g, t) ? 1 : 0;
}

std::vector<Triple> unshielded_triples(const MixedGraph& g) {
    std::vector<Triple> out;
    for (NodeIndex x = 0; x < g.size(); ++x)
        for (NodeIndex y = 0; y < g.size(); ++y) {
            if (y == x || !g.adjacent(x, y)) continue;
            for (NodeIndex z = x + 1; z < g.size(); ++z)
                if (z != y && g.adjacent(y, z) && !g.adjacent(x, z)) out.push_back({x, y, z});
        }
    return out;
}

std::vector<Triple> unshielded_colliders(const MixedGraph& g) {
    std::vector<Triple> out;
    for (const Triple& t : unshielded_triples(g))
        if (g.has_arrow(t.x, t.y) && g.has_arrow(t.z, t.y)) out.push_back(t);
    return out;
}

bool markov_equivalent(const MixedGraph& g1, const MixedGraph& g2) {
    if (g1.names() != g2.names()) throw std::invalid_argument("markov_equivalent: node sets differ");
    require_dag(g1, "markov_equivalent");
    require_dag(g2, "markov_equivalent");
    return g1.same_skeleton(g2) && unshielded_colliders(g1) == unshielded_colliders(g2);
}

std::optional<MixedGraph> consistent_dag_extension(const MixedGraph& g) {
    if (g.has_flags() || g.has_directed_cycle()) return std::nullopt;
    MixedGraph out = g;
    const int d = g.size();
    std::vector<char> alive(d, 1);
    for (int removed = 0; removed < d; ++removed) {
        bool found = false;
        for (NodeIndex x = 0; x < d && !found; ++x) {
            if (!alive[x]) continue;
            bool sink = true;
            std::vector<NodeIndex> nbrs;
            for (NodeIndex w : g.adjacents(x)) {
                if (!alive[w]) continue;
                if (g.has_arrow(x, w)) sink = false;
                nbrs.push_back(w);
            }
            if (!sink) continue;
            bool ok = true;
            for (NodeIndex y : nbrs) {
                if (!g.is_undirected(x, y)) continue;
                for (NodeIndex w : nbrs)
                    if (w != y && !g.adjacent(y, w)) ok = false;
            }
            if (!ok) continue;
            for (NodeIndex y : nbrs)
                if (g.is_undirected(x, y)) out.orient(y, x);
            alive[x] = 0;
            found = true;
        }
        if (!found) return std::nullopt;
    }
    return out;
}

std::optional<int> shortest_collider_free_path_length(const MixedGraph& g, NodeIndex x, NodeIndex y) {
    if (x < 0 || y < 0 || x >= g.size() || y >= g.size()) throw std::out_of_range("node index out of range");
    if (x == y) return 0;
    if (g.adjacent(x, y)) return 1;
    int best = g.size();  // a simple path has at most d-1 edges
    bool found = false;
    std::vector<char> on_path(g.size(), 0);
    std::function<void(NodeIndex, NodeIndex, int)> dfs = [&](NodeIndex prev, NodeIndex cur, int len) {
        if (len + 1 >= best) return;
        for (NodeIndex next : g.adjacents(cur)) {
            if (on_path[next]) continue;
            if (prev >= 0 && g.has_arrow(prev, cur) && g.has_arrow(next, cur)) continue;
            if (next == y) {
                best = len + 1;
                found = true;
                return;
            }
            on_path[next] = 1;
            dfs(cur, next, len + 1);
            on_path[next] = 0;
        }
    };
    on_path[x] = 1;
    dfs(-1, x, 0);
    if (!found) return std::nullopt;
    return best;
}

std::vector<MixedGraph> all_consistent_dag_extensions(const MixedGraph& g) {
    if (g.has_flags()) return {};
    std::vector<Edge> undirected;
    for (const Edge& e : g.edges())
        if (e.mark == EdgeMark::Undirected) undirected.push_back(e);
    if (undirected.size() > 24) throw std::invalid_argument("all_consistent_dag_extensions: too many undirected edges");
    const std::vector<Triple> colliders = unshielded_colliders(g);
    std::vector<MixedGraph> out;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << undirected.size()); ++bits) {
        MixedGraph h = g;
        for (std::size_t i = 0; i < undirected.size(); ++i) {
            const Edge& e = undirected[i];
            if (bits >> i & 1) h.orient(e.b, e.a);
            else h.orient(e.a, e.b);
        }
        if (h.has_directed_cycle()) continue;
        if (unshielded_colliders(h) != colliders) continue;
        out.push_back(std::move(h));
    }
    return out;
}

MixedGraph cpdag_of(const MixedGraph& dag) {
    require_dag(dag, "cpdag_of");
    MixedGraph g(dag.names());
    for (const Edge& e : dag.edges()) g.add_undirected(e.a, e.b);
    for (const Triple& t : unshielded_colliders(dag)) {
        g.orient(t.x, t.y);
        g.orient(t.z, t.y);
    }
    const int d = g.size();
    bool changed = true;
    while (changed) {
        changed = false;
        for (NodeIndex i = 0; i < d; ++i)
            for (NodeIndex j = 0; j < d; ++j) {
                if (i == j || !g.is_undirected(i, j)) continue;
                bool fire = false;
                for (NodeIndex k = 0; k < d && !fire; ++k) {
                    if (k == i || k == j) continue;
                    // k -> i - j with k, j non-adjacent
                    if (g.has_arrow(k, i) && !g.adjacent(k, j)) fire = true;
                    // i -> k -> j
                    else if (g.has_arrow(i, k) && g.has_arrow(k, j)) fire = true;
                }
                // i - k -> j and i - l -> j with k, l non-adjacent
                for (NodeIndex k = 0; k < d && !fire; ++k) {
                    if (!g.is_undirected(i, k) || !g.has_arrow(k, j)) continue;
                    for (NodeIndex l = k + 1; l < d && !fire; ++l)
                        if (g.is_undirected(i, l) && g.has_arrow(l, j) && !g.adjacent(k, l)) fire = true;
                }
                // i - k -> l -> j with k, j non-adjacent and i adjacent to l
                for (NodeIndex k = 0; k < d && !fire; ++k) {
                    if (k == j || !g.is_undirected(i, k) || g.adjacent(k, j)) continue;
                    for (NodeIndex l = 0; l < d && !fire; ++l)
                        if (l != i && g.has_arrow(k, l) && g.has_arrow(l, j) && g.adjacent(i, l)) fire = true;
                }
                if (fire) {
                    g.orient(i, j);
                    changed = true;
                }
            }
    }
    return g;
}

}  // namespace ck
