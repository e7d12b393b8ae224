#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "coherencykit/coherency.hpp"
#include "coherencykit/dataset.hpp"
#include "coherencykit/discovery.hpp"
#include "coherencykit/simulate.hpp"

namespace ck {

// Flag value, else COHERENCYKIT_SEED, else 0.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag);

// Node indices for a comma-separated list of names; "default" or empty gives
// the identity order.
std::vector<NodeIndex> parse_order(const std::string& spec, const std::vector<std::string>& names);

struct DiscoverOptions {
    bool auto_mpg = false;
    std::optional<std::string> data_path;  // CSV input; for --auto-mpg falls back to COHERENCYKIT_AUTO_MPG
    std::optional<std::vector<std::string>> columns;
    std::optional<std::string> model;
    std::optional<double> c;
    int n = 1000;
    bool oracle = false;  // d-separation in the model's DAG instead of sampled data
    RunConfig config;
    bool policy_given = false;
    bool variant_given = false;
    std::string order = "default";
    std::vector<Resolution> resolutions;  // empty: none, or both ambiguity resolutions when ambiguities appear
};

struct DiscoverOutput {
    DiscoveryResult result;
    std::vector<ScoreReport> reports;
    nlohmann::json bundle;
    std::vector<std::string> warnings;
};

DiscoverOutput cmd_discover(const DiscoverOptions& options);

struct ReplicateOptions {
    std::string model;
    std::optional<double> c;
    std::vector<int> sample_sizes{50, 100, 1000, 10000};
    int reps = 100;
    std::uint64_t seed = 0;
    RunConfig config;
    Resolution resolution = Resolution::DropConflicts;
    unsigned threads = 0;
};

std::vector<ReplicationSummary> cmd_replicate(const ReplicateOptions& options);

struct DsepAnswer {
    std::string query;
    bool separated;
};

// One verdict per non-blank, non-comment query line. Errors carry line numbers.
std::vector<DsepAnswer> cmd_dsep(const MixedGraph& graph, const std::string& queries);

}  // namespace ck
