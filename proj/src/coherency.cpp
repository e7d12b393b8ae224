#include "coherencykit/coherency.hpp"

#include <cmath>
#include <stdexcept>

#include "coherencykit/errors.hpp"
#include "coherencykit/separation.hpp"

namespace ck {

const char* to_string(ScoreVariant v) {
    switch (v) {
        case ScoreVariant::StandardTotal: return "standard_total";
        case ScoreVariant::StandardFaithfulness: return "standard_faithfulness";
        case ScoreVariant::StandardMarkov: return "standard_markov";
        case ScoreVariant::CondSetSizeTotal: return "cond_set_size_total";
        case ScoreVariant::CondSetSizeFaithfulness: return "cond_set_size_faithfulness";
        case ScoreVariant::CondSetSizeMarkov: return "cond_set_size_markov";
        case ScoreVariant::PathLengthFaithfulness: return "path_length_faithfulness";
        case ScoreVariant::PValueFaithfulness: return "p_value_faithfulness";
    }
    return "";
}

ScoreVariant parse_score_variant(const std::string& s) {
    for (ScoreVariant v : kAllScoreVariants)
        if (s == to_string(v)) return v;
    throw std::invalid_argument("unknown score variant '" + s + "'");
}

const char* to_string(OutcomeClass c) {
    switch (c) {
        case OutcomeClass::G1: return "G1";
        case OutcomeClass::G2: return "G2";
        case OutcomeClass::G3: return "G3";
    }
    return "";
}

WeightSpec WeightSpec::of(ScoreVariant v) {
    switch (v) {
        case ScoreVariant::StandardTotal: return {WeightBase::Unit, false, false, false};
        case ScoreVariant::StandardFaithfulness: return {WeightBase::Unit, true, false, false};
        case ScoreVariant::StandardMarkov: return {WeightBase::Unit, false, true, false};
        case ScoreVariant::CondSetSizeTotal: return {WeightBase::CondSetSize, false, false, false};
        case ScoreVariant::CondSetSizeFaithfulness: return {WeightBase::CondSetSize, true, false, false};
        case ScoreVariant::CondSetSizeMarkov: return {WeightBase::CondSetSize, false, true, false};
        case ScoreVariant::PathLengthFaithfulness: return {WeightBase::PathLength, true, false, true};
        case ScoreVariant::PValueFaithfulness: return {WeightBase::PValue, true, false, true};
    }
    throw std::invalid_argument("unknown score variant");
}

namespace {

double base_weight(WeightBase base, const TestRecord& rec, double alpha, const MixedGraph& graph) {
    switch (base) {
        case WeightBase::Unit: return 1.0;
        case WeightBase::CondSetSize: return std::exp(-static_cast<double>(rec.tuple.s.size()));
        case WeightBase::PathLength: {
            auto len = shortest_collider_free_path_length(graph, rec.tuple.x, rec.tuple.y);
            return len ? std::exp(-static_cast<double>(*len)) : 0.0;
        }
        case WeightBase::PValue: {
            const double p = rec.p_value.value_or(1.0);
            return std::max(0.0, std::log1p(p - alpha));
        }
    }
    return 0.0;
}

struct Tally {
    double numerator = 0.0;
    double denominator = 0.0;
    bool any_in_support = false;
};

Tally tally(const MixedGraph& graph, const TestLedger& ledger, const WeightSpec& spec,
            const std::vector<int>& separated) {
    Tally t;
    const auto& recs = ledger.records();
    for (std::size_t i = 0; i < recs.size(); ++i) {
        const TestRecord& rec = recs[i];
        const bool sep = separated[i] != 0;
        const bool passes = (!spec.only_independent || rec.independent()) && (!spec.only_separated || sep);
        if (!passes && spec.filter_denominator) continue;
        t.any_in_support = true;
        const double w = base_weight(spec.base, rec, ledger.alpha(), graph);
        t.denominator += w;
        const bool mismatch = sep != rec.independent();
        if (passes && mismatch) t.numerator += w;
    }
    return t;
}

std::vector<int> separation_vector(const MixedGraph& graph, const TestLedger& ledger) {
    std::vector<int> sep;
    sep.reserve(ledger.size());
    for (const TestRecord& rec : ledger.records()) sep.push_back(separation_indicator(graph, rec.tuple));
    return sep;
}

void require_unflagged(const MixedGraph& g) {
    if (g.has_flags()) throw UnresolvedGraphError("graph carries conflict or ambiguity flags; resolve it first");
}

}  // namespace

IncoherentTuples incoherent_tuples(const MixedGraph& graph, const TestLedger& ledger) {
    require_unflagged(graph);
    IncoherentTuples out;
    for (const TestRecord& rec : ledger.records()) {
        const bool sep = separation_indicator(graph, rec.tuple) == 1;
        if (!rec.independent() && sep) out.markov.push_back(rec.tuple);
        if (rec.independent() && !sep) out.faithfulness.push_back(rec.tuple);
    }
    return out;
}

double weight(const WeightSpec& spec, const CITuple& t, const TestLedger& ledger, const MixedGraph& graph) {
    const TestRecord* rec = ledger.find(t);
    if (!rec) throw std::invalid_argument("weight: tuple was never tested");
    if (spec.only_independent && !rec->independent()) return 0.0;
    if (spec.only_separated && separation_indicator(graph, t) == 0) return 0.0;
    return base_weight(spec.base, *rec, ledger.alpha(), graph);
}

double coherency_score(const MixedGraph& graph, const TestLedger& ledger, const WeightSpec& spec) {
    require_unflagged(graph);
    const Tally t = tally(graph, ledger, spec, separation_vector(graph, ledger));
    if (!t.any_in_support) return 1.0;
    if (!(t.denominator > 0.0)) throw TrivialWeightError("every tested tuple received weight zero");
    return 1.0 - t.numerator / t.denominator;
}

ScoreReport score_graph(const MixedGraph& graph, const TestLedger& ledger) {
    require_unflagged(graph);
    ScoreReport report;
    const std::vector<int> sep = separation_vector(graph, ledger);
    for (std::size_t i = 0; i < ledger.size(); ++i) {
        const TestRecord& rec = ledger.records()[i];
        if (!rec.independent() && sep[i]) report.incoherent.markov.push_back(rec.tuple);
        if (rec.independent() && !sep[i]) report.incoherent.faithfulness.push_back(rec.tuple);
    }
    for (std::size_t k = 0; k < kAllScoreVariants.size(); ++k) {
        const ScoreVariant v = kAllScoreVariants[k];
        const Tally t = tally(graph, ledger, WeightSpec::of(v), sep);
        if (!t.any_in_support) {
            report.scores[k] = 1.0;
        } else if (!(t.denominator > 0.0)) {
            report.scores[k] = 1.0;
            report.vacuous.push_back(v);
        } else {
            report.scores[k] = 1.0 - t.numerator / t.denominator;
        }
    }
    report.outcome = report.incoherent.empty() ? OutcomeClass::G3 : OutcomeClass::G2;
    report.scored_graph = graph;
    return report;
}

ScoreReport score_report(const DiscoveryResult& result, Resolution resolution) {
    const int conflicts = result.conflict_count();
    const int ambiguities = result.ambiguity_count();
    ScoreReport report;
    if (result.graph.has_flags() && resolution == Resolution::None) {
        report.outcome = OutcomeClass::G1;
    } else {
        report = score_graph(resolve(result, resolution), result.ledger);
        if (result.graph.has_flags()) report.outcome = OutcomeClass::G1;
    }
    report.conflict_count = conflicts;
    report.ambiguity_count = ambiguities;
    report.resolution = resolution;
    return report;
}

}  // namespace ck
