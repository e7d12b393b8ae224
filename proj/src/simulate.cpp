#include "coherencykit/simulate.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "coherencykit/errors.hpp"

namespace ck {

std::vector<NodeIndex> Scm::observed() const {
    std::vector<NodeIndex> out;
    for (int i = 0; i < size(); ++i)
        if (!latent[i]) out.push_back(i);
    return out;
}

std::vector<std::string> Scm::observed_names() const {
    std::vector<std::string> out;
    for (NodeIndex i : observed()) out.push_back(names[i]);
    return out;
}

std::vector<NodeIndex> Scm::topological_order() const {
    const int d = size();
    for (int j = 0; j < d; ++j)
        if (coeffs(j, j) != 0.0) throw InvalidGraphError("model '" + id + "' has a self-loop on " + names[j]);
    std::vector<int> indeg(d, 0);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i)
            if (i != j && coeffs(j, i) != 0.0) ++indeg[j];
    std::vector<NodeIndex> order;
    std::vector<char> done(d, 0);
    while (static_cast<int>(order.size()) < d) {
        bool progress = false;
        for (int v = 0; v < d; ++v) {
            if (done[v] || indeg[v] != 0) continue;
            done[v] = 1;
            order.push_back(v);
            for (int j = 0; j < d; ++j)
                if (j != v && coeffs(j, v) != 0.0) --indeg[j];
            progress = true;
            break;
        }
        if (!progress) throw InvalidGraphError("model '" + id + "' is cyclic");
    }
    return order;
}

MixedGraph Scm::dag() const {
    MixedGraph g(names);
    for (int j = 0; j < size(); ++j)
        for (int i = 0; i < size(); ++i)
            if (i != j && coeffs(j, i) != 0.0) g.add_directed(i, j);
    return g;
}

const std::vector<ModelInfo>& model_catalog() {
    static const std::vector<ModelInfo> catalog{
        {"mediated3", "X -> Y -> Z, every edge weight c", true, 1.0},
        {"mediated4", "X -> Y -> Z -> W, every edge weight c", true, 1.0},
        {"five_node", "X -> Z <- Y, Z -> W, Z -> V, every edge weight c", true, 1.0},
        {"faithful_violation4", "X -> Z -> W -> Y and X -> Y (2, -2): X and Y uncorrelated", false, 0.0},
        {"faithful_violation3", "X -> Z -> Y and X -> Y (2, -2): X and Y uncorrelated", false, 0.0},
        {"confounder_diamond", "X, Y, Z, V pairwise around a cycle sharing latent parents U1..U4", false, 0.0},
        {"confounder_triangle", "X, Y, Z pairwise sharing latent parents U1..U3", false, 0.0},
    };
    return catalog;
}

namespace {

struct ModelBuilder {
    Scm scm;

    ModelBuilder(std::string id, std::vector<std::string> observed, std::vector<std::string> latents = {}) {
        scm.id = std::move(id);
        scm.names = std::move(observed);
        scm.latent.assign(scm.names.size(), false);
        for (auto& l : latents) {
            scm.names.push_back(std::move(l));
            scm.latent.push_back(true);
        }
        const auto d = static_cast<Eigen::Index>(scm.names.size());
        scm.coeffs = Eigen::MatrixXd::Zero(d, d);
        scm.noise_std = Eigen::VectorXd::Ones(d);
    }

    ModelBuilder& edge(const std::string& from, const std::string& to, double w) {
        scm.coeffs(index(to), index(from)) = w;
        return *this;
    }

    int index(const std::string& name) const {
        for (int i = 0; i < scm.size(); ++i)
            if (scm.names[i] == name) return i;
        throw std::logic_error("model builder: unknown node " + name);
    }
};

}  // namespace

Scm build_model(const std::string& id, std::optional<double> c_opt) {
    const ModelInfo* info = nullptr;
    for (const ModelInfo& m : model_catalog())
        if (m.id == id) info = &m;
    if (!info) throw std::invalid_argument("unknown model '" + id + "'");
    if (c_opt && !info->parameterized) throw std::invalid_argument("model '" + id + "' takes no c parameter");
    const double c = c_opt.value_or(info->default_c);

    if (id == "mediated3") return ModelBuilder(id, {"X", "Y", "Z"}).edge("X", "Y", c).edge("Y", "Z", c).scm;
    if (id == "mediated4")
        return ModelBuilder(id, {"X", "Y", "Z", "W"}).edge("X", "Y", c).edge("Y", "Z", c).edge("Z", "W", c).scm;
    if (id == "five_node")
        return ModelBuilder(id, {"X", "Y", "Z", "W", "V"})
            .edge("X", "Z", c)
            .edge("Y", "Z", c)
            .edge("Z", "W", c)
            .edge("Z", "V", c)
            .scm;
    if (id == "faithful_violation4")
        return ModelBuilder(id, {"X", "Z", "W", "Y"})
            .edge("X", "Z", 1)
            .edge("Z", "W", 1)
            .edge("X", "Y", 2)
            .edge("W", "Y", -2)
            .scm;
    if (id == "faithful_violation3")
        return ModelBuilder(id, {"X", "Z", "Y"}).edge("X", "Z", 1).edge("X", "Y", 2).edge("Z", "Y", -2).scm;
    if (id == "confounder_diamond")
        return ModelBuilder(id, {"X", "Y", "Z", "V"}, {"U1", "U2", "U3", "U4"})
            .edge("U1", "X", 1)
            .edge("U2", "X", 1)
            .edge("U2", "Y", 1)
            .edge("U3", "Y", 1)
            .edge("U3", "Z", 1)
            .edge("U4", "Z", 1)
            .edge("U4", "V", 1)
            .edge("U1", "V", 1)
            .scm;
    // confounder_triangle
    return ModelBuilder(id, {"X", "Y", "Z"}, {"U1", "U2", "U3"})
        .edge("U1", "X", 1)
        .edge("U2", "X", 1)
        .edge("U2", "Y", 1)
        .edge("U3", "Y", 1)
        .edge("U3", "Z", 1)
        .edge("U1", "Z", 1)
        .scm;
}

double GaussianStream::uniform_open() {
    // 53 random bits mapped to (0, 1]; never 0, so the logarithm is finite.
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

double GaussianStream::next() {
    if (spare_) {
        double v = *spare_;
        spare_.reset();
        return v;
    }
    const double u1 = uniform_open();
    const double u2 = uniform_open();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    return radius * std::cos(angle);
}

Dataset sample(const Scm& scm, int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample size must be positive");
    const std::vector<NodeIndex> topo = scm.topological_order();
    const std::vector<NodeIndex> obs = scm.observed();
    const int d = scm.size();
    GaussianStream rng(seed);
    Dataset out{scm.observed_names(), Eigen::MatrixXd(n, static_cast<Eigen::Index>(obs.size()))};
    Eigen::VectorXd row(d);
    for (int r = 0; r < n; ++r) {
        for (NodeIndex j : topo) {
            double v = scm.noise_std(j) * rng.next();
            for (int i = 0; i < d; ++i)
                if (scm.coeffs(j, i) != 0.0) v += scm.coeffs(j, i) * row(i);
            row(j) = v;
        }
        for (std::size_t k = 0; k < obs.size(); ++k) out.values(r, static_cast<Eigen::Index>(k)) = row(obs[k]);
    }
    return out;
}

Eigen::MatrixXd population_covariance(const Scm& scm) {
    const int d = scm.size();
    // Total-effect matrix A = (I - B)^-1, row by row in topological order.
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d, d);
    for (NodeIndex j : scm.topological_order()) {
        a(j, j) = 1.0;
        for (int i = 0; i < d; ++i)
            if (scm.coeffs(j, i) != 0.0) a.row(j) += scm.coeffs(j, i) * a.row(i);
    }
    const Eigen::VectorXd var = scm.noise_std.array().square();
    return a * var.asDiagonal() * a.transpose();
}

ReplicationSummary replicate(const Scm& scm, int n, int reps, const RunConfig& cfg, Resolution resolution,
                             std::uint64_t base_seed, unsigned threads) {
    if (reps < 1) throw std::invalid_argument("reps must be at least 1");
    const std::vector<std::string> names = scm.observed_names();

    struct Outcome {
        ScoreReport report;
        int conflicts = 0;
        int ambiguities = 0;
    };
    std::vector<Outcome> outcomes(static_cast<std::size_t>(reps));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(reps));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int r; (r = next.fetch_add(1)) < reps;) {
            try {
                const Dataset data = sample(scm, n, base_seed + static_cast<std::uint64_t>(r));
                const FisherZTester tester(data);
                const DiscoveryResult res = run_pc(tester, names, cfg);
                outcomes[r] = {score_report(res, resolution), res.conflict_count(), res.ambiguity_count()};
            } catch (...) {
                errors[r] = std::current_exception();
            }
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(reps));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    ReplicationSummary s;
    s.model = scm.id;
    s.n = n;
    s.reps = reps;
    s.base_seed = base_seed;
    s.config = cfg;
    s.resolution = resolution;
    for (const Outcome& o : outcomes) {
        s.mean_conflicts += o.conflicts;
        s.mean_ambiguities += o.ambiguities;
        s.class_counts[static_cast<std::size_t>(o.report.outcome)] += 1;
        if (o.report.scored()) ++s.scored_reps;
    }
    s.mean_conflicts /= reps;
    s.mean_ambiguities /= reps;
    for (std::size_t k = 0; k < kAllScoreVariants.size(); ++k) {
        double sum = 0.0;
        int count = 0;
        for (const Outcome& o : outcomes)
            if (o.report.scores[k]) {
                sum += *o.report.scores[k];
                ++count;
            }
        if (count == 0) continue;
        const double mean = sum / count;
        double sq = 0.0;
        for (const Outcome& o : outcomes)
            if (o.report.scores[k]) sq += (*o.report.scores[k] - mean) * (*o.report.scores[k] - mean);
        s.mean[k] = mean;
        s.std_dev[k] = std::sqrt(sq / count);
    }
    return s;
}

}  // namespace ck
