#include "coherencykit/report.hpp"

#include <cmath>
#include <cstdio>

#include "coherencykit/graph_io.hpp"

namespace ck {

double round4(double v) { return std::round(v * 1e4) / 1e4; }

namespace {

std::string fixed4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", round4(v));
    return buf;
}

nlohmann::json tuples_to_json(const std::vector<CITuple>& ts, const std::vector<std::string>& names) {
    nlohmann::json out = nlohmann::json::array();
    for (const CITuple& t : ts) out.push_back(tuple_to_json(t, names));
    return out;
}

nlohmann::json names_of(const std::vector<NodeIndex>& idx, const std::vector<std::string>& names) {
    nlohmann::json out = nlohmann::json::array();
    for (NodeIndex v : idx) out.push_back(names.at(v));
    return out;
}

}  // namespace

nlohmann::json ledger_to_json(const TestLedger& ledger, const std::vector<std::string>& names) {
    nlohmann::json out = nlohmann::json::array();
    for (const TestRecord& r : ledger.records()) {
        nlohmann::json j = tuple_to_json(r.tuple, names);
        j["decision"] = to_string(r.decision);
        j["p_value"] = r.p_value ? nlohmann::json(*r.p_value) : nlohmann::json(nullptr);
        j["statistic"] = r.statistic ? nlohmann::json(*r.statistic) : nlohmann::json(nullptr);
        j["phase"] = to_string(r.phase);
        j["order"] = r.order;
        out.push_back(std::move(j));
    }
    return out;
}

nlohmann::json config_to_json(const RunConfig& cfg, const std::vector<std::string>& names) {
    std::vector<NodeIndex> order = cfg.order;
    if (order.empty())
        for (NodeIndex i = 0; i < static_cast<NodeIndex>(names.size()); ++i) order.push_back(i);
    return {{"variant", to_string(cfg.variant)},
            {"policy", to_string(cfg.policy)},
            {"resolution", to_string(cfg.resolution)},
            {"alpha", cfg.alpha},
            {"order", names_of(order, names)},
            {"seed", cfg.seed}};
}

nlohmann::json discovery_to_json(const DiscoveryResult& result) {
    const auto& names = result.skeleton.names();
    nlohmann::json sepsets = nlohmann::json::array();
    for (const auto& [pair, s] : result.sepsets)
        sepsets.push_back({{"x", names.at(pair.first)}, {"y", names.at(pair.second)}, {"s", names_of(s, names)}});
    nlohmann::json events = nlohmann::json::array();
    for (const OrientationEvent& e : result.events)
        events.push_back({{"from", names.at(e.from)},
                          {"to", names.at(e.to)},
                          {"cause", e.cause},
                          {"outcome", to_string(e.outcome)}});
    nlohmann::json triples = nlohmann::json::array();
    for (const auto& [t, dec] : result.decisions) {
        nlohmann::json j{{"triple", {names.at(t.x), names.at(t.y), names.at(t.z)}}, {"decision", to_string(dec)}};
        if (auto it = result.separating_sets.find(t); it != result.separating_sets.end()) {
            nlohmann::json sets = nlohmann::json::array();
            for (const auto& s : it->second) sets.push_back(names_of(s, names));
            j["separating_sets"] = std::move(sets);
        }
        triples.push_back(std::move(j));
    }
    return {{"graph", graph_to_json(result.graph)},
            {"skeleton", graph_to_json(result.skeleton)},
            {"ledger", ledger_to_json(result.ledger, names)},
            {"sepsets", sepsets},
            {"events", events},
            {"triples", triples},
            {"max_depth", result.max_depth},
            {"config", config_to_json(result.config, names)}};
}

nlohmann::json score_report_to_json(const ScoreReport& report, const std::vector<std::string>& names) {
    nlohmann::json scores = nlohmann::json::object();
    for (std::size_t k = 0; k < kAllScoreVariants.size(); ++k)
        if (report.scores[k]) scores[to_string(kAllScoreVariants[k])] = round4(*report.scores[k]);
    nlohmann::json vacuous = nlohmann::json::array();
    for (ScoreVariant v : report.vacuous) vacuous.push_back(to_string(v));
    nlohmann::json j{{"resolution", to_string(report.resolution)},
                     {"class", to_string(report.outcome)},
                     {"conflicts", report.conflict_count},
                     {"ambiguities", report.ambiguity_count},
                     {"scores", report.scored() ? scores : nlohmann::json(nullptr)},
                     {"vacuous_scores", vacuous},
                     {"markov_incoherent", tuples_to_json(report.incoherent.markov, names)},
                     {"faithfulness_incoherent", tuples_to_json(report.incoherent.faithfulness, names)}};
    j["graph"] = report.scored_graph ? graph_to_json(*report.scored_graph) : nlohmann::json(nullptr);
    return j;
}

nlohmann::json replication_to_json(const ReplicationSummary& s) {
    nlohmann::json mean = nlohmann::json::object(), sd = nlohmann::json::object();
    for (std::size_t k = 0; k < kAllScoreVariants.size(); ++k) {
        if (s.mean[k]) mean[to_string(kAllScoreVariants[k])] = *s.mean[k];
        if (s.std_dev[k]) sd[to_string(kAllScoreVariants[k])] = *s.std_dev[k];
    }
    return {{"model", s.model},
            {"c", s.c ? nlohmann::json(*s.c) : nlohmann::json(nullptr)},
            {"n", s.n},
            {"reps", s.reps},
            {"base_seed", s.base_seed},
            {"variant", to_string(s.config.variant)},
            {"policy", to_string(s.config.policy)},
            {"alpha", s.config.alpha},
            {"resolution", to_string(s.resolution)},
            {"scored_reps", s.scored_reps},
            {"mean", mean},
            {"std", sd},
            {"mean_conflicts", s.mean_conflicts},
            {"mean_ambiguities", s.mean_ambiguities},
            {"classes", {{"G1", s.class_counts[0]}, {"G2", s.class_counts[1]}, {"G3", s.class_counts[2]}}}};
}

std::string score_reports_csv(const std::vector<ScoreReport>& reports) {
    std::string out = "score";
    for (const ScoreReport& r : reports) out += std::string(",") + to_string(r.resolution);
    out += "\n";
    for (std::size_t k = 0; k < kAllScoreVariants.size(); ++k) {
        out += to_string(kAllScoreVariants[k]);
        for (const ScoreReport& r : reports) out += "," + (r.scores[k] ? fixed4(*r.scores[k]) : std::string());
        out += "\n";
    }
    out += "class";
    for (const ScoreReport& r : reports) out += std::string(",") + to_string(r.outcome);
    out += "\n";
    return out;
}

std::string replication_grid_csv(const std::vector<ReplicationSummary>& rows) {
    std::string out = "score";
    for (const auto& s : rows) out += ",n=" + std::to_string(s.n);
    out += "\n";
    for (std::size_t k = 0; k < kAllScoreVariants.size(); ++k) {
        out += to_string(kAllScoreVariants[k]);
        for (const auto& s : rows) {
            out += ",";
            if (s.mean[k]) out += fixed4(*s.mean[k]) + " (" + fixed4(*s.std_dev[k]) + ")";
        }
        out += "\n";
    }
    out += "mean_conflicts";
    for (const auto& s : rows) out += "," + fixed4(s.mean_conflicts);
    out += "\n";
    return out;
}

}  // namespace ck
