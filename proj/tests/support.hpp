#pragma once

// Reference implementations used only as test oracles. They share no code
// with the library beyond the graph container.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "coherencykit/citest.hpp"
#include "coherencykit/graph.hpp"

namespace cktest {

using ck::CITuple;
using ck::MixedGraph;
using ck::NodeIndex;

inline std::vector<std::string> letters(int d) {
    std::vector<std::string> out;
    for (int i = 0; i < d; ++i) out.push_back("V" + std::to_string(i));
    return out;
}

// Edge i -> j for i < j with probability p, then nodes relabelled by a
// random permutation so the topological order is not the index order.
inline MixedGraph random_dag(int d, double p, std::mt19937_64& rng) {
    std::vector<int> perm(d);
    for (int i = 0; i < d; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::bernoulli_distribution coin(p);
    MixedGraph g(letters(d));
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
            if (coin(rng)) g.add_directed(perm[i], perm[j]);
    return g;
}

inline std::vector<std::vector<NodeIndex>> subsets_up_to(const std::vector<NodeIndex>& pool, int k) {
    std::vector<std::vector<NodeIndex>> out{{}};
    for (NodeIndex v : pool) {
        const std::size_t n = out.size();
        for (std::size_t i = 0; i < n; ++i)
            if (static_cast<int>(out[i].size()) < k) {
                auto s = out[i];
                s.push_back(v);
                out.push_back(std::move(s));
            }
    }
    return out;
}

// Every canonical tuple over d nodes with |S| <= k.
inline std::vector<CITuple> all_tuples(int d, int k) {
    std::vector<CITuple> out;
    for (int x = 0; x < d; ++x)
        for (int y = x + 1; y < d; ++y) {
            std::vector<NodeIndex> pool;
            for (int v = 0; v < d; ++v)
                if (v != x && v != y) pool.push_back(v);
            for (auto& s : subsets_up_to(pool, k)) out.push_back(CITuple::make(x, y, s));
        }
    return out;
}

inline bool is_descendant_or_self(const MixedGraph& dag, NodeIndex from, NodeIndex target) {
    std::vector<bool> seen(dag.size(), false);
    std::vector<NodeIndex> stack{from};
    while (!stack.empty()) {
        NodeIndex v = stack.back();
        stack.pop_back();
        if (v == target) return true;
        if (seen[v]) continue;
        seen[v] = true;
        for (NodeIndex c : dag.children(v)) stack.push_back(c);
    }
    return false;
}

// Textbook d-separation: walk every simple path in the skeleton and check
// each interior node for blocking.
inline bool naive_d_separated(const MixedGraph& dag, const CITuple& t) {
    const std::set<NodeIndex> s(t.s.begin(), t.s.end());
    auto open_collider = [&](NodeIndex b) {
        for (NodeIndex z : s)
            if (is_descendant_or_self(dag, b, z)) return true;
        return false;
    };
    std::vector<NodeIndex> path{t.x};
    std::vector<bool> on(dag.size(), false);
    on[t.x] = true;
    std::function<bool(NodeIndex)> connected = [&](NodeIndex v) -> bool {
        if (v == t.y) {
            for (std::size_t i = 1; i + 1 < path.size(); ++i) {
                const NodeIndex a = path[i - 1], b = path[i], c = path[i + 1];
                const bool collider = dag.has_arrow(a, b) && dag.has_arrow(c, b);
                if (collider ? !open_collider(b) : s.contains(b)) return false;
            }
            return true;
        }
        for (NodeIndex w : dag.adjacents(v)) {
            if (on[w]) continue;
            on[w] = true;
            path.push_back(w);
            const bool hit = connected(w);
            path.pop_back();
            on[w] = false;
            if (hit) return true;
        }
        return false;
    };
    return !connected(t.x);
}

// Partial correlation by ordinary least squares: regress x and y on S plus
// an intercept and correlate the residuals.
inline double residual_partial_correlation(const Eigen::MatrixXd& data, const CITuple& t) {
    const Eigen::Index n = data.rows();
    Eigen::MatrixXd design(n, static_cast<Eigen::Index>(t.s.size()) + 1);
    design.col(0).setOnes();
    for (std::size_t k = 0; k < t.s.size(); ++k) design.col(static_cast<Eigen::Index>(k) + 1) = data.col(t.s[k]);
    auto residual = [&](int col) -> Eigen::VectorXd {
        const Eigen::VectorXd target = data.col(col);
        const Eigen::VectorXd beta = design.colPivHouseholderQr().solve(target);
        return target - design * beta;
    };
    const Eigen::VectorXd rx = residual(t.x);
    const Eigen::VectorXd ry = residual(t.y);
    return rx.dot(ry) / std::sqrt(rx.squaredNorm() * ry.squaredNorm());
}

}  // namespace cktest
