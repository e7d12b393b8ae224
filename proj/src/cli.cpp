#include "coherencykit/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "coherencykit/errors.hpp"
#include "coherencykit/graph_io.hpp"
#include "coherencykit/report.hpp"
#include "coherencykit/separation.hpp"

namespace ck {

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("COHERENCYKIT_SEED"); env && *env) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0') return v;
        throw std::invalid_argument(std::string("COHERENCYKIT_SEED is not an unsigned integer: '") + env + "'");
    }
    return 0;
}

std::vector<NodeIndex> parse_order(const std::string& spec, const std::vector<std::string>& names) {
    if (spec.empty() || spec == "default") return {};
    std::vector<NodeIndex> order;
    std::stringstream in(spec);
    for (std::string tok; std::getline(in, tok, ',');) {
        auto it = std::find(names.begin(), names.end(), tok);
        if (it == names.end()) throw std::invalid_argument("--order names unknown variable '" + tok + "'");
        order.push_back(static_cast<NodeIndex>(it - names.begin()));
    }
    RunConfig probe;
    probe.order = order;
    order_rank(probe, static_cast<int>(names.size()));  // validates the permutation
    return order;
}

namespace {

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace

DiscoverOutput cmd_discover(const DiscoverOptions& options) {
    DiscoverOutput out;
    RunConfig cfg = options.config;
    nlohmann::json provenance{{"tool", "coherencykit"}, {"version", kToolVersion}};

    std::optional<Dataset> data;
    std::optional<Scm> scm;
    if (options.auto_mpg) {
        std::string path;
        if (options.data_path) path = *options.data_path;
        else if (const char* env = std::getenv("COHERENCYKIT_AUTO_MPG"); env && *env) path = env;
        else throw Error("--auto-mpg needs the data file: pass --data <path> or set COHERENCYKIT_AUTO_MPG");
        LoadedTable t = load_auto_mpg(path);
        provenance["source"] = "auto-mpg";
        provenance["rows"] = t.data.n();
        provenance["rows_dropped"] = t.rows_dropped;
        data = std::move(t.data);
        if (!options.policy_given) cfg.policy = ColliderPolicy::MajorityAmbiguity;
        if (!options.variant_given) cfg.variant = Variant::StableAll;
    } else if (options.data_path) {
        LoadOptions lo;
        lo.columns = options.columns;
        LoadedTable t = load_csv(*options.data_path, lo);
        provenance["source"] = "csv";
        provenance["rows"] = t.data.n();
        provenance["rows_dropped"] = t.rows_dropped;
        data = std::move(t.data);
    } else if (options.model) {
        scm = build_model(*options.model, options.c);
        provenance["source"] = options.oracle ? "oracle" : "model";
        provenance["model"] = *options.model;
        if (options.c) provenance["c"] = *options.c;
        if (!options.oracle) {
            data = sample(*scm, options.n, cfg.seed);
            provenance["n"] = options.n;
        }
    } else {
        throw Error("discover needs --auto-mpg, --data <csv> or --model <id>");
    }
    if (options.oracle && !scm) throw Error("--oracle requires --model");

    std::vector<std::string> names = data ? data->columns : scm->observed_names();
    cfg.order = parse_order(options.order, names);
    provenance["seed"] = cfg.seed;
    if (data) provenance["data_hash"] = hex64(dataset_hash(*data));

    if (data) {
        const FisherZTester tester(*data);
        out.result = run_pc(tester, names, cfg);
    } else {
        const GraphOracleTester tester(scm->dag(), scm->observed());
        out.result = run_pc(tester, names, cfg);
    }

    std::vector<Resolution> resolutions = options.resolutions;
    if (resolutions.empty()) {
        resolutions.push_back(Resolution::None);
        if (out.result.ambiguity_count() > 0) {
            resolutions.push_back(Resolution::AsCollider);
            resolutions.push_back(Resolution::AsNonCollider);
        }
    }
    for (Resolution r : resolutions) out.reports.push_back(score_report(out.result, r));
    for (const ScoreReport& r : out.reports)
        if (r.outcome == OutcomeClass::G1 && !r.scored())
            out.warnings.push_back("output carries " + std::to_string(r.conflict_count) + " conflict(s) and " +
                                   std::to_string(r.ambiguity_count) +
                                   " ambiguity(ies); scores need a resolution (--resolve)");

    nlohmann::json reports = nlohmann::json::array();
    for (const ScoreReport& r : out.reports) reports.push_back(score_report_to_json(r, names));
    out.bundle = {{"provenance", provenance}, {"discovery", discovery_to_json(out.result)}, {"reports", reports}};
    return out;
}

std::vector<ReplicationSummary> cmd_replicate(const ReplicateOptions& options) {
    const Scm scm = build_model(options.model, options.c);
    RunConfig cfg = options.config;
    cfg.seed = options.seed;
    std::vector<ReplicationSummary> out;
    for (int n : options.sample_sizes) {
        ReplicationSummary s = replicate(scm, n, options.reps, cfg, options.resolution, options.seed, options.threads);
        s.c = options.c;
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<DsepAnswer> cmd_dsep(const MixedGraph& graph, const std::string& queries) {
    std::vector<DsepAnswer> out;
    std::istringstream in(queries);
    int line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const CITuple t = parse_query(line, graph, line_no);
        const auto begin = line.find_first_not_of(" \t");
        const auto end = line.find_last_not_of(" \t\r");
        out.push_back({line.substr(begin, end - begin + 1), separation_indicator(graph, t) == 1});
    }
    return out;
}

}  // namespace ck
