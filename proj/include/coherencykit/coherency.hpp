#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "coherencykit/citest.hpp"
#include "coherencykit/discovery.hpp"
#include "coherencykit/graph.hpp"

namespace ck {

enum class ScoreVariant {
    StandardTotal,
    StandardFaithfulness,
    StandardMarkov,
    CondSetSizeTotal,
    CondSetSizeFaithfulness,
    CondSetSizeMarkov,
    PathLengthFaithfulness,
    PValueFaithfulness,
};

inline constexpr std::array<ScoreVariant, 8> kAllScoreVariants{
    ScoreVariant::StandardTotal,          ScoreVariant::StandardFaithfulness,    ScoreVariant::StandardMarkov,
    ScoreVariant::CondSetSizeTotal,       ScoreVariant::CondSetSizeFaithfulness, ScoreVariant::CondSetSizeMarkov,
    ScoreVariant::PathLengthFaithfulness, ScoreVariant::PValueFaithfulness,
};

const char* to_string(ScoreVariant v);
ScoreVariant parse_score_variant(const std::string& s);

enum class WeightBase {
    Unit,         // 1
    CondSetSize,  // exp(-|S|)
    PathLength,   // exp(-length of the shortest collider-free x-y path), 0 without one
    PValue,       // log(1 + (p - alpha)); oracle records count as p = 1
};

struct WeightSpec {
    WeightBase base = WeightBase::Unit;
    bool only_independent = false;  // zero weight on tuples tested dependent
    bool only_separated = false;    // zero weight on tuples connected in the graph
    // Whether the filters also thin out the normalising sum. When false the
    // denominator is the base weight summed over every tested tuple.
    bool filter_denominator = false;

    static WeightSpec of(ScoreVariant v);
};

struct IncoherentTuples {
    std::vector<CITuple> markov;        // tested dependent, separated in the graph
    std::vector<CITuple> faithfulness;  // tested independent, connected in the graph

    bool empty() const { return markov.empty() && faithfulness.empty(); }
};

// Throws UnresolvedGraphError on a flagged graph.
IncoherentTuples incoherent_tuples(const MixedGraph& graph, const TestLedger& ledger);

// Numerator weight of a recorded tuple. Throws std::invalid_argument if t was never tested.
double weight(const WeightSpec& spec, const CITuple& t, const TestLedger& ledger, const MixedGraph& graph);

// 1 - sum(w * mismatch) / sum(w). An empty normalising set gives 1; a
// non-empty set whose weights are all zero throws TrivialWeightError.
double coherency_score(const MixedGraph& graph, const TestLedger& ledger, const WeightSpec& spec);

enum class OutcomeClass { G1, G2, G3 };
const char* to_string(OutcomeClass c);

struct ScoreReport {
    // Indexed like kAllScoreVariants; empty when no flag-free graph was scored.
    std::array<std::optional<double>, 8> scores{};
    // Variants whose weights were all zero; they are reported as 1.
    std::vector<ScoreVariant> vacuous;
    IncoherentTuples incoherent;
    int conflict_count = 0;
    int ambiguity_count = 0;
    OutcomeClass outcome = OutcomeClass::G3;
    Resolution resolution = Resolution::None;
    std::optional<MixedGraph> scored_graph;

    std::optional<double> score(ScoreVariant v) const { return scores[static_cast<std::size_t>(v)]; }
    bool scored() const { return scored_graph.has_value(); }
};

// Scores a result. A flagged result with Resolution::None yields a G1 report
// without scores; otherwise the graph is resolved first. The class stays G1
// whenever the unresolved output carried flags.
ScoreReport score_report(const DiscoveryResult& result, Resolution resolution);

// Scores an arbitrary flag-free graph against a ledger.
ScoreReport score_graph(const MixedGraph& graph, const TestLedger& ledger);

}  // namespace ck
