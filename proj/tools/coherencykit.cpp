// Command-line front end: discover, replicate, dsep, models.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "coherencykit/cli.hpp"
#include "coherencykit/errors.hpp"
#include "coherencykit/graph_io.hpp"
#include "coherencykit/report.hpp"

namespace {

namespace fs = std::filesystem;

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    for (std::string tok; std::getline(in, tok, ',');)
        if (!tok.empty()) out.push_back(tok);
    return out;
}

void emit(const std::string& output_dir, const std::string& file, const std::string& content) {
    if (output_dir.empty()) {
        std::cout << content;
        return;
    }
    fs::create_directories(output_dir);
    std::ofstream f(fs::path(output_dir) / file, std::ios::binary);
    if (!f) throw ck::Error("cannot write " + (fs::path(output_dir) / file).string());
    f << content;
}

struct Common {
    double alpha = 0.05;
    std::string variant = "classic";
    std::string policy = "mark";
    std::string order = "default";
    std::optional<std::uint64_t> seed;
    std::string format = "json";
    std::string output;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--alpha", c.alpha, "significance level of the CI tests")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--variant", c.variant, "skeleton search: classic|stable|stable-all")
        ->check(CLI::IsMember({"classic", "stable", "stable-all"}));
    cmd->add_option("--policy", c.policy, "collider conflicts: mark|overwrite|majority")
        ->check(CLI::IsMember({"mark", "overwrite", "majority"}));
    cmd->add_option("--order", c.order, "variable order as comma-separated names, or 'default'");
    cmd->add_option("--seed", c.seed, "random seed (falls back to COHERENCYKIT_SEED, then 0)");
    cmd->add_option("--format", c.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--output", c.output, "directory for report files instead of stdout");
}

ck::RunConfig config_from(const Common& c) {
    ck::RunConfig cfg;
    cfg.alpha = c.alpha;
    cfg.variant = ck::parse_variant(c.variant);
    cfg.policy = ck::parse_policy(c.policy);
    cfg.seed = ck::resolve_seed(c.seed);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coherencykit: PC causal discovery with internal coherency scores"};
    app.require_subcommand(1);

    Common dc;
    ck::DiscoverOptions dopt;
    std::string resolve_list;
    std::string columns;
    auto* discover = app.add_subcommand("discover", "run PC and score the output against its own tests");
    add_common(discover, dc);
    discover->add_flag("--auto-mpg", dopt.auto_mpg, "Auto MPG preset (six continuous columns, stable-all skeleton, majority policy)");
    discover->add_option("--data", dopt.data_path, "CSV or whitespace table to analyse");
    discover->add_option("--columns", columns, "comma-separated subset of columns");
    discover->add_option("--model", dopt.model, "catalog model to sample from (see 'models')");
    discover->add_option("--c", dopt.c, "effect strength of parameterized models");
    discover->add_option("--n", dopt.n, "sample size for --model")->check(CLI::PositiveNumber);
    discover->add_flag("--oracle", dopt.oracle, "answer tests by d-separation in the model's DAG");
    discover->add_option("--resolve", resolve_list,
                         "comma-separated strategies: none|collider|noncollider|order-first|drop-conflicts");

    Common rc;
    ck::ReplicateOptions ropt;
    std::string n_list = "50,100,1000,10000";
    std::string rep_resolve = ck::to_string(ropt.resolution);
    auto* replicate = app.add_subcommand("replicate", "Monte-Carlo averages of the scores over repetitions");
    add_common(replicate, rc);
    replicate->add_option("--model", ropt.model, "catalog model")->required();
    replicate->add_option("--c", ropt.c, "effect strength of parameterized models");
    replicate->add_option("--n", n_list, "comma-separated sample sizes");
    replicate->add_option("--reps", ropt.reps, "repetitions per sample size")->check(CLI::PositiveNumber);
    replicate->add_option("--resolve", rep_resolve, "strategy applied before scoring flagged outputs");
    replicate->add_option("--threads", ropt.threads, "worker threads (0 = all cores)");

    std::string graph_path, query_path;
    std::vector<std::string> inline_queries;
    auto* dsep = app.add_subcommand("dsep", "answer separation queries on a graph file");
    dsep->add_option("graph", graph_path, "edge-list or .json graph file")->required();
    dsep->add_option("--queries", query_path, "file with one 'X Y | S...' query per line (default: stdin)");
    dsep->add_option("--query,-q", inline_queries, "a single query; may repeat");

    auto* models = app.add_subcommand("models", "list the model catalog");

    CLI11_PARSE(app, argc, argv);

    try {
        if (discover->parsed()) {
            dopt.config = config_from(dc);
            dopt.policy_given = discover->count("--policy") > 0;
            dopt.variant_given = discover->count("--variant") > 0;
            dopt.order = dc.order;
            if (!columns.empty()) dopt.columns = split_csv(columns);
            for (const auto& r : split_csv(resolve_list)) dopt.resolutions.push_back(ck::parse_resolution(r));
            ck::DiscoverOutput out = ck::cmd_discover(dopt);
            for (const auto& w : out.warnings) std::cerr << "warning: " << w << "\n";
            if (dc.format == "json" || !dc.output.empty()) emit(dc.output, "report.json", out.bundle.dump(2) + "\n");
            if (dc.format == "csv" || !dc.output.empty()) emit(dc.output, "scores.csv", ck::score_reports_csv(out.reports));
        } else if (replicate->parsed()) {
            ropt.config = config_from(rc);
            ropt.seed = ropt.config.seed;
            ropt.resolution = ck::parse_resolution(rep_resolve);
            ropt.sample_sizes.clear();
            for (const auto& s : split_csv(n_list)) ropt.sample_sizes.push_back(std::stoi(s));
            if (rc.order != "default") {
                const ck::Scm scm = ck::build_model(ropt.model, ropt.c);
                ropt.config.order = ck::parse_order(rc.order, scm.observed_names());
            }
            const auto rows = ck::cmd_replicate(ropt);
            nlohmann::json j = nlohmann::json::array();
            for (const auto& s : rows) j.push_back(ck::replication_to_json(s));
            if (rc.format == "json" || !rc.output.empty()) emit(rc.output, "replicate.json", j.dump(2) + "\n");
            if (rc.format == "csv" || !rc.output.empty())
                emit(rc.output, "replicate.csv", ck::replication_grid_csv(rows));
        } else if (dsep->parsed()) {
            const ck::MixedGraph g = ck::read_edge_list_file(graph_path);
            std::string queries;
            if (!inline_queries.empty()) {
                for (const auto& q : inline_queries) queries += q + "\n";
            } else if (!query_path.empty()) {
                std::ifstream in(query_path);
                if (!in) throw ck::Error("cannot open query file '" + query_path + "'");
                std::stringstream buf;
                buf << in.rdbuf();
                queries = buf.str();
            } else {
                std::stringstream buf;
                buf << std::cin.rdbuf();
                queries = buf.str();
            }
            for (const auto& a : ck::cmd_dsep(g, queries))
                std::cout << a.query << "\t" << (a.separated ? "separated" : "connected") << "\n";
        } else if (models->parsed()) {
            for (const auto& m : ck::model_catalog()) {
                std::cout << m.id;
                if (m.parameterized) std::cout << " (c, default " << m.default_c << ")";
                std::cout << "\t" << m.summary << "\n";
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
