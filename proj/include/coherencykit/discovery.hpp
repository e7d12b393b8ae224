#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "coherencykit/citest.hpp"
#include "coherencykit/graph.hpp"

namespace ck {

enum class Variant {
    Classic,    // adjacencies shrink as edges go
    Stable,     // adjacencies frozen per level, first independent set removes the edge
    StableAll,  // frozen per level, every subset tested from both endpoints, removals at level end
};

// What happens when an unshielded triple asks for an arrow that contradicts
// an existing one.
enum class ColliderPolicy {
    MarkConflicts,      // keep the earlier arrow, flag the edge
    Overwrite,          // the later arrow wins
    MajorityAmbiguity,  // consult every separating set; disagreeing triples get an ambiguity flag
};

enum class Resolution {
    None,           // leave flags in place
    AsCollider,     // every ambiguous triple becomes a collider
    AsNonCollider,  // every ambiguous triple becomes a non-collider
    OrderFirst,     // replay orientation, the first arrow on each edge wins
    DropConflicts,  // conflicted edges lose their arrow, ambiguous triples stay unoriented
};

const char* to_string(Variant v);
const char* to_string(ColliderPolicy p);
const char* to_string(Resolution r);
Variant parse_variant(const std::string& s);
ColliderPolicy parse_policy(const std::string& s);
Resolution parse_resolution(const std::string& s);

struct RunConfig {
    Variant variant = Variant::Classic;
    ColliderPolicy policy = ColliderPolicy::MarkConflicts;
    Resolution resolution = Resolution::None;
    double alpha = 0.05;
    std::vector<NodeIndex> order;  // empty means 0..d-1
    std::uint64_t seed = 0;
};

using SepSets = std::map<NodePair, std::vector<NodeIndex>>;

enum class TripleDecision { Collider, NonCollider, Ambiguous };
const char* to_string(TripleDecision d);

enum class EventOutcome { Applied, ConflictFlagged, Overwritten };
const char* to_string(EventOutcome o);

struct OrientationEvent {
    NodeIndex from;
    NodeIndex to;
    std::string cause;  // "collider(X,Y,Z)" or "R1".."R4"
    EventOutcome outcome;
};

struct DiscoveryResult {
    MixedGraph graph;
    MixedGraph skeleton;
    TestLedger ledger;
    SepSets sepsets;
    std::vector<OrientationEvent> events;
    RunConfig config;
    std::map<Triple, TripleDecision> decisions;
    // Separating sets consulted for each triple under MajorityAmbiguity.
    std::map<Triple, std::vector<std::vector<NodeIndex>>> separating_sets;
    int max_depth = -1;  // largest conditioning-set size tested in the skeleton phase

    int conflict_count() const { return static_cast<int>(graph.conflicts().size()); }
    int ambiguity_count() const { return static_cast<int>(graph.ambiguous_triples().size()); }
};

// Position of every node in cfg.order (identity when the order is empty).
std::vector<int> order_rank(const RunConfig& cfg, int d);

struct SkeletonResult {
    MixedGraph skeleton;
    SepSets sepsets;
    int max_depth = -1;
};

SkeletonResult pc_skeleton(const Tester& tester, const std::vector<std::string>& names, const RunConfig& cfg,
                           TestLedger& ledger);

struct AmbiguityVerdict {
    TripleDecision decision;
    std::vector<std::vector<NodeIndex>> separating_sets;
};

// Collects every subset of adj(x)\{z} and adj(z)\{x} that separates x and z,
// plus the stored sepset. Subsets run up to the size of the stored sepset, or
// up to max_depth when there is none. Fresh tests enter the ledger tagged
// Orientation.
AmbiguityVerdict decide_ambiguity(const Triple& t, const Tester& tester, const MixedGraph& skeleton,
                                  const SepSets& sepsets, int max_depth, const RunConfig& cfg, TestLedger& ledger);

// Collider phase. Fills result.graph, result.decisions, result.events and,
// under MajorityAmbiguity, result.separating_sets.
void orient_colliders(DiscoveryResult& result, const Tester& tester);

enum class ConflictMode { Flag, Overwrite, KeepFirst };

// Meek rules R1-R4 to closure, in synchronous rounds: every rule is matched
// against the graph as it stood at the start of the round, then the wanted
// arrows are applied rule by rule in edge order. Flagged edges are never
// used as premises.
void meek_rules(MixedGraph& g, const std::map<Triple, TripleDecision>& decisions, const std::vector<int>& rank,
                ConflictMode mode, std::vector<OrientationEvent>* events = nullptr);

DiscoveryResult run_pc(const Tester& tester, const std::vector<std::string>& names, const RunConfig& cfg);

// Flag-free graph per strategy. Throws UnresolvedGraphError for None when
// flags remain; an unflagged graph is returned unchanged.
MixedGraph resolve(const DiscoveryResult& result, Resolution strategy);

}  // namespace ck
