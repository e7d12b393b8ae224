#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "coherencykit/citest.hpp"
#include "coherencykit/coherency.hpp"
#include "coherencykit/discovery.hpp"
#include "coherencykit/graph.hpp"

namespace ck {

// Linear-Gaussian structural causal model. coeffs(j, i) is the weight of i -> j.
struct Scm {
    std::string id;
    std::vector<std::string> names;
    Eigen::MatrixXd coeffs;
    Eigen::VectorXd noise_std;
    std::vector<bool> latent;

    int size() const { return static_cast<int>(names.size()); }
    std::vector<NodeIndex> observed() const;
    std::vector<std::string> observed_names() const;
    // Nodes in an order where every parent precedes its children; throws
    // InvalidGraphError when the coefficients form a cycle.
    std::vector<NodeIndex> topological_order() const;
    // Full DAG over all variables, latent ones included.
    MixedGraph dag() const;
};

struct ModelInfo {
    std::string id;
    std::string summary;
    bool parameterized;  // accepts c
    double default_c;
};

const std::vector<ModelInfo>& model_catalog();

// Throws std::invalid_argument for an unknown id.
Scm build_model(const std::string& id, std::optional<double> c = std::nullopt);

/// Standard normal draws from a 64-bit Mersenne Twister: uniforms take the
/// top 53 bits of one output, pairs become normals by the Box-Muller
/// transform, both halves used. Same seed, same stream on every platform.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}
    double next();

private:
    double uniform_open();  // (0, 1]
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

// Rows are drawn one after another, variables within a row in topological
// order. Latent columns are dropped.
Dataset sample(const Scm& scm, int n, std::uint64_t seed);

// (I - B)^-1 D (I - B)^-T over all variables by forward substitution.
// Exactly cancelling path products give exactly zero.
Eigen::MatrixXd population_covariance(const Scm& scm);

struct ReplicationSummary {
    std::string model;
    std::optional<double> c;
    int n = 0;
    int reps = 0;
    std::uint64_t base_seed = 0;
    RunConfig config;
    Resolution resolution = Resolution::None;
    std::array<std::optional<double>, 8> mean{};
    std::array<std::optional<double>, 8> std_dev{};  // population standard deviation
    int scored_reps = 0;                              // repetitions that produced scores
    double mean_conflicts = 0.0;
    double mean_ambiguities = 0.0;
    std::array<int, 3> class_counts{};  // G1, G2, G3
};

// reps independent sample -> run_pc -> score_report pipelines with seeds
// base_seed .. base_seed + reps - 1. threads = 0 uses the hardware concurrency.
ReplicationSummary replicate(const Scm& scm, int n, int reps, const RunConfig& cfg, Resolution resolution,
                             std::uint64_t base_seed, unsigned threads = 0);

}  // namespace ck
