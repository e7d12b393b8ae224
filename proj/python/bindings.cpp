#include <algorithm>
#include <optional>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "coherencykit/citest.hpp"
#include "coherencykit/coherency.hpp"
#include "coherencykit/discovery.hpp"
#include "coherencykit/errors.hpp"
#include "coherencykit/graph_io.hpp"
#include "coherencykit/report.hpp"
#include "coherencykit/separation.hpp"
#include "coherencykit/simulate.hpp"

namespace py = pybind11;
using namespace ck;

namespace {

RunConfig make_config(double alpha, const std::string& variant, const std::string& policy,
                      const std::vector<std::string>& order, const std::vector<std::string>& names) {
    RunConfig cfg;
    cfg.alpha = alpha;
    cfg.variant = parse_variant(variant);
    cfg.policy = parse_policy(policy);
    for (const auto& n : order) {
        auto it = std::find(names.begin(), names.end(), n);
        if (it == names.end()) throw std::invalid_argument("order names unknown variable '" + n + "'");
        cfg.order.push_back(static_cast<NodeIndex>(it - names.begin()));
    }
    order_rank(cfg, static_cast<int>(names.size()));
    return cfg;
}

// Discovery bundle plus one score report per requested resolution, as JSON text.
std::string bundle(const DiscoveryResult& result, const std::vector<std::string>& resolutions) {
    nlohmann::json reports = nlohmann::json::array();
    for (const auto& r : resolutions)
        reports.push_back(score_report_to_json(score_report(result, parse_resolution(r)), result.graph.names()));
    return nlohmann::json{{"discovery", discovery_to_json(result)}, {"reports", reports}}.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "PC-style causal discovery with coherency scoring of the output graph against the test ledger.";

    auto base = py::register_exception<Error>(m, "CoherencyError", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<UnresolvedGraphError>(m, "UnresolvedGraphError", base.ptr());
    py::register_exception<InvalidGraphError>(m, "InvalidGraphError", base.ptr());
    py::register_exception<DegenerateDataError>(m, "DegenerateDataError", base.ptr());
    py::register_exception<InsufficientSamplesError>(m, "InsufficientSamplesError", base.ptr());
    py::register_exception<TrivialWeightError>(m, "TrivialWeightError", base.ptr());

    m.def(
        "discover_data",
        [](const Eigen::MatrixXd& values, const std::vector<std::string>& columns, double alpha,
           const std::string& variant, const std::string& policy, const std::vector<std::string>& order,
           const std::vector<std::string>& resolutions) {
            if (static_cast<std::size_t>(values.cols()) != columns.size())
                throw std::invalid_argument("column names do not match the data width");
            const Dataset data{columns, values};
            const RunConfig cfg = make_config(alpha, variant, policy, order, columns);
            py::gil_scoped_release release;
            return bundle(run_pc(FisherZTester(data), columns, cfg), resolutions);
        },
        py::arg("values"), py::arg("columns"), py::arg("alpha") = 0.05, py::arg("variant") = "classic",
        py::arg("policy") = "mark", py::arg("order") = std::vector<std::string>{},
        py::arg("resolutions") = std::vector<std::string>{"none"});

    m.def(
        "discover_oracle",
        [](const std::string& edges, const std::vector<std::string>& observed, const std::string& variant,
           const std::string& policy, const std::vector<std::string>& resolutions) {
            const MixedGraph dag = parse_edge_list(edges);
            std::vector<NodeIndex> obs;
            std::vector<std::string> names;
            for (const auto& n : observed) obs.push_back(dag.index_of(n));
            if (obs.empty())
                for (NodeIndex i = 0; i < dag.size(); ++i) obs.push_back(i);
            for (NodeIndex i : obs) names.push_back(dag.name(i));
            const RunConfig cfg = make_config(0.05, variant, policy, {}, names);
            return bundle(run_pc(GraphOracleTester(dag, obs), names, cfg), resolutions);
        },
        py::arg("edges"), py::arg("observed") = std::vector<std::string>{}, py::arg("variant") = "classic",
        py::arg("policy") = "mark", py::arg("resolutions") = std::vector<std::string>{"none"});

    m.def(
        "d_separated",
        [](const std::string& edges, const std::string& query) {
            const MixedGraph g = parse_edge_list(edges);
            return separation_indicator(g, parse_query(query, g)) == 1;
        },
        py::arg("edges"), py::arg("query"), "Separation of `X Y | S` in a DAG, CPDAG or flag-free PDAG.");

    m.def(
        "cpdag",
        [](const std::string& edges) { return format_edge_list(cpdag_of(parse_edge_list(edges))); },
        py::arg("edges"));

    m.def(
        "fisher_z",
        [](double r, int n, int cond_size, double alpha) {
            const TestOutcome o = fisher_z_from_correlation(r, n, cond_size, alpha);
            return py::make_tuple(*o.p_value, *o.statistic, o.decision == Decision::Independent);
        },
        py::arg("r"), py::arg("n"), py::arg("cond_size"), py::arg("alpha") = 0.05,
        "Returns (p_value, statistic, independent).");

    m.def(
        "partial_correlation",
        [](const Eigen::MatrixXd& values, int x, int y, const std::vector<int>& s) {
            std::vector<std::string> cols;
            for (Eigen::Index j = 0; j < values.cols(); ++j) cols.push_back("V" + std::to_string(j));
            return partial_correlation(Dataset{cols, values}, CITuple::make(x, y, s));
        },
        py::arg("values"), py::arg("x"), py::arg("y"), py::arg("s") = std::vector<int>{});

    m.def("models", [] {
        py::list out;
        for (const ModelInfo& info : model_catalog()) {
            py::dict d;
            d["id"] = info.id;
            d["summary"] = info.summary;
            d["parameterized"] = info.parameterized;
            d["default_c"] = info.default_c;
            out.append(d);
        }
        return out;
    });

    m.def(
        "sample",
        [](const std::string& model, int n, std::uint64_t seed, std::optional<double> c) {
            Dataset d = sample(build_model(model, c), n, seed);
            return py::make_tuple(d.values, d.columns);
        },
        py::arg("model"), py::arg("n"), py::arg("seed") = 0, py::arg("c") = py::none(),
        "Returns (values, column names) with latent columns removed.");

    m.def(
        "replicate",
        [](const std::string& model, int n, int reps, std::optional<double> c, std::uint64_t seed,
           const std::string& resolution, const std::string& variant, const std::string& policy, unsigned threads) {
            const Scm scm = build_model(model, c);
            const RunConfig cfg = make_config(0.05, variant, policy, {}, scm.observed_names());
            py::gil_scoped_release release;
            ReplicationSummary s = replicate(scm, n, reps, cfg, parse_resolution(resolution), seed, threads);
            s.c = c;
            return replication_to_json(s).dump();
        },
        py::arg("model"), py::arg("n"), py::arg("reps") = 100, py::arg("c") = py::none(), py::arg("seed") = 0,
        py::arg("resolution") = "drop-conflicts", py::arg("variant") = "classic", py::arg("policy") = "mark",
        py::arg("threads") = 0);

    m.attr("__version__") = kToolVersion;
}
