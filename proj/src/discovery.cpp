#include "coherencykit/discovery.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "coherencykit/errors.hpp"
#include "coherencykit/separation.hpp"

namespace ck {

const char* to_string(Variant v) {
    switch (v) {
        case Variant::Classic: return "classic";
        case Variant::Stable: return "stable";
        case Variant::StableAll: return "stable-all";
    }
    return "classic";
}

const char* to_string(ColliderPolicy p) {
    switch (p) {
        case ColliderPolicy::MarkConflicts: return "mark";
        case ColliderPolicy::Overwrite: return "overwrite";
        case ColliderPolicy::MajorityAmbiguity: return "majority";
    }
    return "mark";
}

const char* to_string(Resolution r) {
    switch (r) {
        case Resolution::None: return "none";
        case Resolution::AsCollider: return "collider";
        case Resolution::AsNonCollider: return "noncollider";
        case Resolution::OrderFirst: return "order-first";
        case Resolution::DropConflicts: return "drop-conflicts";
    }
    return "none";
}

const char* to_string(TripleDecision d) {
    switch (d) {
        case TripleDecision::Collider: return "collider";
        case TripleDecision::NonCollider: return "noncollider";
        case TripleDecision::Ambiguous: return "ambiguous";
    }
    return "ambiguous";
}

const char* to_string(EventOutcome o) {
    switch (o) {
        case EventOutcome::Applied: return "applied";
        case EventOutcome::ConflictFlagged: return "conflict";
        case EventOutcome::Overwritten: return "overwritten";
    }
    return "applied";
}

Variant parse_variant(const std::string& s) {
    if (s == "classic") return Variant::Classic;
    if (s == "stable") return Variant::Stable;
    if (s == "stable-all") return Variant::StableAll;
    throw std::invalid_argument("unknown variant '" + s + "' (classic|stable|stable-all)");
}

ColliderPolicy parse_policy(const std::string& s) {
    if (s == "mark") return ColliderPolicy::MarkConflicts;
    if (s == "overwrite") return ColliderPolicy::Overwrite;
    if (s == "majority") return ColliderPolicy::MajorityAmbiguity;
    throw std::invalid_argument("unknown policy '" + s + "' (mark|overwrite|majority)");
}

Resolution parse_resolution(const std::string& s) {
    if (s == "none") return Resolution::None;
    if (s == "collider") return Resolution::AsCollider;
    if (s == "noncollider") return Resolution::AsNonCollider;
    if (s == "order-first") return Resolution::OrderFirst;
    if (s == "drop-conflicts") return Resolution::DropConflicts;
    throw std::invalid_argument("unknown resolution '" + s + "' (none|collider|noncollider|order-first|drop-conflicts)");
}

std::vector<int> order_rank(const RunConfig& cfg, int d) {
    std::vector<int> rank(d);
    if (cfg.order.empty()) {
        std::iota(rank.begin(), rank.end(), 0);
        return rank;
    }
    if (static_cast<int>(cfg.order.size()) != d) throw std::invalid_argument("variable order has the wrong length");
    std::vector<char> seen(d, 0);
    for (int pos = 0; pos < d; ++pos) {
        NodeIndex v = cfg.order[pos];
        if (v < 0 || v >= d || seen[v]) throw std::invalid_argument("variable order is not a permutation");
        seen[v] = 1;
        rank[v] = pos;
    }
    return rank;
}

namespace {

std::vector<NodeIndex> sorted_by_rank(std::vector<NodeIndex> v, const std::vector<int>& rank) {
    std::sort(v.begin(), v.end(), [&](NodeIndex a, NodeIndex b) { return rank[a] < rank[b]; });
    return v;
}

// Calls f on every k-subset of `items` in lexicographic position order; stops
// when f returns true. Returns whether it stopped early.
template <class F>
bool for_each_subset(const std::vector<NodeIndex>& items, int k, F&& f) {
    const int m = static_cast<int>(items.size());
    if (k > m) return false;
    std::vector<int> pos(k);
    std::iota(pos.begin(), pos.end(), 0);
    std::vector<NodeIndex> subset(k);
    while (true) {
        for (int i = 0; i < k; ++i) subset[i] = items[pos[i]];
        if (f(subset)) return true;
        int i = k - 1;
        while (i >= 0 && pos[i] == m - k + i) --i;
        if (i < 0) return false;
        ++pos[i];
        for (int j = i + 1; j < k; ++j) pos[j] = pos[j - 1] + 1;
    }
}

std::vector<Triple> triples_in_rank_order(const MixedGraph& skeleton, const std::vector<int>& rank) {
    std::vector<Triple> triples = unshielded_triples(skeleton);
    auto key = [&](const Triple& t) {
        int a = rank[t.x], c = rank[t.z];
        return std::array<int, 3>{std::min(a, c), rank[t.y], std::max(a, c)};
    };
    std::sort(triples.begin(), triples.end(), [&](const Triple& l, const Triple& r) { return key(l) < key(r); });
    return triples;
}

std::string triple_label(const MixedGraph& g, const Triple& t) {
    return "collider(" + g.name(t.x) + "," + g.name(t.y) + "," + g.name(t.z) + ")";
}

// Tries to put an arrow from -> to on an existing edge. Returns true when the
// graph changed (arrow or flag).
bool want_arrow(MixedGraph& g, NodeIndex from, NodeIndex to, ConflictMode mode, const std::string& cause,
                std::vector<OrientationEvent>* events) {
    auto log = [&](EventOutcome o) {
        if (events) events->push_back({from, to, cause, o});
    };
    if (g.is_undirected(from, to)) {
        g.orient(from, to);
        log(EventOutcome::Applied);
        return true;
    }
    if (g.has_arrow(from, to)) return false;
    switch (mode) {
        case ConflictMode::Flag:
            if (g.is_conflicted(from, to)) return false;
            g.flag_conflict(from, to);
            log(EventOutcome::ConflictFlagged);
            return true;
        case ConflictMode::Overwrite:
            g.orient(from, to);
            log(EventOutcome::Overwritten);
            return true;
        case ConflictMode::KeepFirst:
            return false;
    }
    return false;
}

TripleDecision sepset_decision(const Triple& t, const SepSets& sepsets) {
    auto it = sepsets.find(canonical_pair(t.x, t.z));
    if (it == sepsets.end()) throw std::logic_error("no separating set recorded for an unshielded pair");
    const auto& s = it->second;
    return std::find(s.begin(), s.end(), t.y) == s.end() ? TripleDecision::Collider : TripleDecision::NonCollider;
}

// Collider arrows and ambiguity flags for fixed decisions, in rank order.
void apply_decisions(MixedGraph& g, const std::map<Triple, TripleDecision>& decisions, const std::vector<int>& rank,
                     ConflictMode mode, std::vector<OrientationEvent>* events) {
    for (const Triple& t : triples_in_rank_order(g, rank)) {
        auto it = decisions.find(t);
        if (it == decisions.end()) continue;
        if (it->second == TripleDecision::Collider) {
            const std::string cause = triple_label(g, t);
            want_arrow(g, t.x, t.y, mode, cause, events);
            want_arrow(g, t.z, t.y, mode, cause, events);
        } else if (it->second == TripleDecision::Ambiguous) {
            g.mark_ambiguous(t);
        }
    }
}

ConflictMode mode_for(ColliderPolicy p) {
    return p == ColliderPolicy::Overwrite ? ConflictMode::Overwrite : ConflictMode::Flag;
}

}  // namespace

SkeletonResult pc_skeleton(const Tester& tester, const std::vector<std::string>& names, const RunConfig& cfg,
                           TestLedger& ledger) {
    const int d = static_cast<int>(names.size());
    if (d < 2) throw std::invalid_argument("pc_skeleton needs at least two variables");
    if (tester.num_vars() != d) throw std::invalid_argument("tester and variable names disagree on the node count");
    const std::vector<int> rank = order_rank(cfg, d);
    std::vector<NodeIndex> order(d);
    std::iota(order.begin(), order.end(), 0);
    order = sorted_by_rank(order, rank);

    SkeletonResult out{MixedGraph::complete(names), {}, -1};
    MixedGraph& g = out.skeleton;
    const bool freeze = cfg.variant != Variant::Classic;
    const bool exhaustive = cfg.variant == Variant::StableAll;
    for (int k = 0;; ++k) {
        std::vector<std::vector<NodeIndex>> frozen(d);
        if (freeze)
            for (NodeIndex v = 0; v < d; ++v) frozen[v] = sorted_by_rank(g.adjacents(v), rank);
        std::vector<std::pair<NodeIndex, NodeIndex>> removed;
        bool any = false;
        for (NodeIndex x : order) {
            for (NodeIndex y : freeze ? frozen[x] : sorted_by_rank(g.adjacents(x), rank)) {
                if (!g.adjacent(x, y)) continue;
                std::vector<NodeIndex> cand = freeze ? frozen[x] : sorted_by_rank(g.adjacents(x), rank);
                std::erase(cand, y);
                if (static_cast<int>(cand.size()) < k) continue;
                any = true;
                out.max_depth = std::max(out.max_depth, k);
                for_each_subset(cand, k, [&](const std::vector<NodeIndex>& s) {
                    const TestRecord& rec = ledger_record(ledger, tester, CITuple::make(x, y, s), Phase::Skeleton);
                    if (!rec.independent()) return false;
                    out.sepsets.try_emplace(canonical_pair(x, y), rec.tuple.s);
                    if (exhaustive) {
                        removed.emplace_back(x, y);
                        return false;
                    }
                    g.remove_edge(x, y);
                    return true;
                });
            }
        }
        for (auto [x, y] : removed)
            if (g.adjacent(x, y)) g.remove_edge(x, y);
        if (!any) break;
    }
    return out;
}

AmbiguityVerdict decide_ambiguity(const Triple& t, const Tester& tester, const MixedGraph& skeleton,
                                  const SepSets& sepsets, int max_depth, const RunConfig& cfg, TestLedger& ledger) {
    if (!skeleton.adjacent(t.x, t.y) || !skeleton.adjacent(t.y, t.z) || skeleton.adjacent(t.x, t.z))
        throw std::invalid_argument("decide_ambiguity: triple is not unshielded");
    const std::vector<int> rank = order_rank(cfg, skeleton.size());
    std::set<std::vector<NodeIndex>> found;
    int depth = max_depth;
    if (auto it = sepsets.find(canonical_pair(t.x, t.z)); it != sepsets.end()) {
        found.insert(it->second);
        depth = static_cast<int>(it->second.size());
    }

    for (NodeIndex end : {t.x, t.z}) {
        const NodeIndex other = end == t.x ? t.z : t.x;
        std::vector<NodeIndex> cand = sorted_by_rank(skeleton.adjacents(end), rank);
        std::erase(cand, other);
        for (int k = 0; k <= std::min<int>(depth, static_cast<int>(cand.size())); ++k)
            for_each_subset(cand, k, [&](const std::vector<NodeIndex>& s) {
                const TestRecord& rec = ledger_record(ledger, tester, CITuple::make(t.x, t.z, s), Phase::Orientation);
                if (rec.independent()) found.insert(rec.tuple.s);
                return false;
            });
    }

    std::size_t with_y = 0;
    for (const auto& s : found) with_y += std::find(s.begin(), s.end(), t.y) != s.end();
    AmbiguityVerdict v{TripleDecision::Ambiguous, {found.begin(), found.end()}};
    if (with_y == 0) v.decision = TripleDecision::Collider;
    else if (with_y == found.size()) v.decision = TripleDecision::NonCollider;
    return v;
}

void orient_colliders(DiscoveryResult& result, const Tester& tester) {
    const MixedGraph& skeleton = result.skeleton;
    if (skeleton.edge_count() != skeleton.undirected_count())
        throw std::invalid_argument("orient_colliders expects an undirected skeleton");
    const std::vector<int> rank = order_rank(result.config, skeleton.size());
    result.graph = skeleton;
    const ConflictMode mode = mode_for(result.config.policy);
    for (const Triple& t : triples_in_rank_order(skeleton, rank)) {
        TripleDecision decision;
        if (result.config.policy == ColliderPolicy::MajorityAmbiguity) {
            AmbiguityVerdict v = decide_ambiguity(t, tester, skeleton, result.sepsets, result.max_depth,
                                                  result.config, result.ledger);
            decision = v.decision;
            result.separating_sets[t] = std::move(v.separating_sets);
        } else {
            decision = sepset_decision(t, result.sepsets);
        }
        result.decisions[t] = decision;
        if (decision == TripleDecision::Collider) {
            const std::string cause = triple_label(result.graph, t);
            want_arrow(result.graph, t.x, t.y, mode, cause, &result.events);
            want_arrow(result.graph, t.z, t.y, mode, cause, &result.events);
        } else if (decision == TripleDecision::Ambiguous) {
            result.graph.mark_ambiguous(t);
        }
    }
}

void meek_rules(MixedGraph& g, const std::map<Triple, TripleDecision>& decisions, const std::vector<int>& rank,
                ConflictMode mode, std::vector<OrientationEvent>* events) {
    const int d = g.size();
    std::vector<NodeIndex> order(d);
    std::iota(order.begin(), order.end(), 0);
    order = sorted_by_rank(order, rank);

    auto decision_of = [&](NodeIndex a, NodeIndex b, NodeIndex c) {
        auto it = decisions.find(Triple::make(a, b, c));
        return it == decisions.end() ? TripleDecision::NonCollider : it->second;
    };

    struct Want {
        NodeIndex from, to;
        const char* rule;
    };

    while (true) {
        const MixedGraph s = g;
        auto dir = [&](NodeIndex a, NodeIndex b) { return s.has_arrow(a, b) && !s.is_conflicted(a, b); };
        auto und = [&](NodeIndex a, NodeIndex b) { return s.is_undirected(a, b); };

        std::vector<Want> wants;
        for (int rule = 1; rule <= 4; ++rule)
            for (NodeIndex i : order)
                for (NodeIndex j : order) {
                    if (i == j || !s.adjacent(i, j)) continue;
                    bool fire = false;
                    if (rule == 1) {
                        // k -> i - j, k and j apart, and (k, i, j) not a collider or ambiguous.
                        // With i <- j already present the same premise is a conflict.
                        const bool target_open = und(i, j);
                        const bool target_reversed =
                            mode == ConflictMode::Flag && s.has_arrow(j, i) && !s.is_conflicted(i, j);
                        if (!target_open && !target_reversed) continue;
                        for (NodeIndex k = 0; k < d && !fire; ++k) {
                            if (k == i || k == j || !dir(k, i) || s.adjacent(k, j)) continue;
                            const TripleDecision td = decision_of(k, i, j);
                            fire = target_open ? td != TripleDecision::Ambiguous : td == TripleDecision::NonCollider;
                        }
                    } else {
                        if (!und(i, j)) continue;
                        if (rule == 2) {
                            for (NodeIndex k = 0; k < d && !fire; ++k)
                                fire = k != i && k != j && dir(i, k) && dir(k, j);
                        } else if (rule == 3) {
                            for (NodeIndex k = 0; k < d && !fire; ++k) {
                                if (k == i || k == j || !und(i, k) || !dir(k, j)) continue;
                                for (NodeIndex l = k + 1; l < d && !fire; ++l)
                                    fire = l != i && l != j && und(i, l) && dir(l, j) && !s.adjacent(k, l);
                            }
                        } else {
                            for (NodeIndex k = 0; k < d && !fire; ++k) {
                                if (k == i || k == j || !und(i, k) || s.adjacent(k, j)) continue;
                                for (NodeIndex l = 0; l < d && !fire; ++l)
                                    fire = l != i && l != j && l != k && dir(k, l) && dir(l, j) && s.adjacent(i, l);
                            }
                        }
                    }
                    if (fire) wants.push_back({i, j, rule == 1 ? "R1" : rule == 2 ? "R2" : rule == 3 ? "R3" : "R4"});
                }
        bool changed = false;
        for (const Want& w : wants) changed |= want_arrow(g, w.from, w.to, mode, w.rule, events);
        if (!changed) break;
    }
}

DiscoveryResult run_pc(const Tester& tester, const std::vector<std::string>& names, const RunConfig& cfg) {
    DiscoveryResult result{MixedGraph(names), MixedGraph(names), TestLedger(cfg.alpha), {}, {}, cfg, {}, {}, -1};
    SkeletonResult sk = pc_skeleton(tester, names, cfg, result.ledger);
    result.skeleton = std::move(sk.skeleton);
    result.sepsets = std::move(sk.sepsets);
    result.max_depth = sk.max_depth;
    orient_colliders(result, tester);
    meek_rules(result.graph, result.decisions, order_rank(cfg, static_cast<int>(names.size())),
               mode_for(cfg.policy), &result.events);
    return result;
}

MixedGraph resolve(const DiscoveryResult& result, Resolution strategy) {
    if (!result.graph.has_flags()) return result.graph;
    const std::vector<int> rank = order_rank(result.config, result.skeleton.size());
    std::map<Triple, TripleDecision> decisions = result.decisions;
    switch (strategy) {
        case Resolution::None:
            throw UnresolvedGraphError("result carries " + std::to_string(result.conflict_count()) +
                                       " conflict(s) and " + std::to_string(result.ambiguity_count()) +
                                       " ambiguity(ies); choose a resolution strategy");
        case Resolution::DropConflicts: {
            MixedGraph g = result.graph;
            for (auto [a, b] : result.graph.conflicts()) g.make_undirected(a, b);
            g.clear_conflicts();
            g.clear_ambiguities();
            return g;
        }
        case Resolution::AsCollider:
        case Resolution::AsNonCollider:
            for (auto& [t, dec] : decisions)
                if (dec == TripleDecision::Ambiguous)
                    dec = strategy == Resolution::AsCollider ? TripleDecision::Collider : TripleDecision::NonCollider;
            break;
        case Resolution::OrderFirst:
            for (auto& [t, dec] : decisions)
                if (dec == TripleDecision::Ambiguous) dec = sepset_decision(t, result.sepsets);
            break;
    }
    MixedGraph g = result.skeleton;
    apply_decisions(g, decisions, rank, ConflictMode::KeepFirst, nullptr);
    meek_rules(g, decisions, rank, ConflictMode::KeepFirst, nullptr);
    return g;
}

}  // namespace ck
