#pragma once

#include <optional>
#include <vector>

#include "coherencykit/graph.hpp"

namespace ck {

// d-separation on a DAG by reachability (Bayes ball). Throws InvalidGraphError
// on undirected edges or directed cycles.
bool d_separated(const MixedGraph& dag, const CITuple& t);

// Same question answered by enumerating every simple path. Exponential; meant
// for cross-checking small graphs.
bool d_separated_by_paths(const MixedGraph& dag, const CITuple& t);

// Separation in a PDAG/CPDAG: no definite-status path between x and y is
// d-connecting given s. A definite collider (a -> b <- c) passes only when b
// has a directed descendant in s (itself included); a definite non-collider
// (an arrow leaving b, or an unshielded a - b - c) passes only when b is not
// in s; a path through any other configuration does not count.
// Throws UnresolvedGraphError when conflict or ambiguity flags are present.
bool pdag_separated(const MixedGraph& g, const CITuple& t);

// 1 if separated. DAGs use d_separated, anything else pdag_separated.
int separation_indicator(const MixedGraph& g, const CITuple& t);

// Triples (x, y, z) with x < z, x and z both adjacent to y and not to each
// other, ordered by (x, y, z).
std::vector<Triple> unshielded_triples(const MixedGraph& g);

// Unshielded triples whose two edges both point into the middle node.
std::vector<Triple> unshielded_colliders(const MixedGraph& g);

// Verma-Pearl: same skeleton and same unshielded colliders. Both inputs must
// be DAGs over the same node names.
bool markov_equivalent(const MixedGraph& g1, const MixedGraph& g2);

// Dor-Tarsi extension: a DAG on the same skeleton keeping every arrow of g
// and creating no new unshielded collider. Nullopt when no such DAG exists or
// g carries flags.
std::optional<MixedGraph> consistent_dag_extension(const MixedGraph& g);

// Fewest edges on a simple path from x to y without a definite collider.
std::optional<int> shortest_collider_free_path_length(const MixedGraph& g, NodeIndex x, NodeIndex y);

// Every DAG extension of g obtained by orienting its undirected edges without
// cycles or new unshielded colliders. Exponential in the undirected edge count.
std::vector<MixedGraph> all_consistent_dag_extensions(const MixedGraph& g);

// The CPDAG (essential graph) of a DAG: skeleton, unshielded colliders, then
// Meek's rules to closure.
MixedGraph cpdag_of(const MixedGraph& dag);

}  // namespace ck
