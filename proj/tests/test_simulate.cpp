#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "coherencykit/simulate.hpp"
#include "support.hpp"

using namespace ck;

TEST(GaussianStream, DeterministicAndStandardNormal) {
    GaussianStream a(42), b(42), c(43);
    std::vector<double> xs;
    for (int i = 0; i < 200000; ++i) {
        const double x = a.next();
        ASSERT_EQ(x, b.next());
        xs.push_back(x);
    }
    EXPECT_NE(GaussianStream(42).next(), c.next());
    double mean = 0.0, sq = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    for (double x : xs) sq += (x - mean) * (x - mean);
    const double var = sq / static_cast<double>(xs.size());
    // Five standard errors of the mean and of the variance.
    EXPECT_LT(std::abs(mean), 5.0 / std::sqrt(200000.0));
    EXPECT_LT(std::abs(var - 1.0), 5.0 * std::sqrt(2.0 / 200000.0));
}

TEST(Catalog, EveryModelBuildsAsADag) {
    std::set<std::string> ids;
    for (const ModelInfo& m : model_catalog()) {
        EXPECT_TRUE(ids.insert(m.id).second) << m.id;
        const Scm scm = build_model(m.id);
        EXPECT_TRUE(scm.dag().is_dag()) << m.id;
        EXPECT_EQ(scm.topological_order().size(), static_cast<std::size_t>(scm.size()));
        if (m.parameterized) EXPECT_NO_THROW(build_model(m.id, 3.0));
    }
    EXPECT_THROW(build_model("no_such_model"), std::invalid_argument);
}

TEST(Catalog, ParameterSetsEdgeWeights) {
    const Scm scm = build_model("mediated3", 0.2);
    const int x = 0, y = 1;
    ASSERT_EQ(scm.names[x], "X");
    ASSERT_EQ(scm.names[y], "Y");
    EXPECT_DOUBLE_EQ(scm.coeffs(y, x), 0.2);
    EXPECT_DOUBLE_EQ(scm.coeffs(2, y), 0.2);
}

TEST(PopulationCovariance, CancellingPathsGiveExactZero) {
    for (const char* id : {"faithful_violation4", "faithful_violation3"}) {
        const Scm scm = build_model(id);
        const Eigen::MatrixXd cov = population_covariance(scm);
        const auto names = scm.names;
        const auto at = [&](const char* n) {
            return static_cast<int>(std::find(names.begin(), names.end(), n) - names.begin());
        };
        EXPECT_EQ(cov(at("X"), at("Y")), 0.0) << id;
        EXPECT_NE(cov(at("X"), at("Z")), 0.0) << id;
    }
}

TEST(PopulationCovariance, MatchesClosedFormForAChain) {
    // X -> Y -> Z with weights a, b and unit noise.
    const Scm scm = build_model("mediated3", 0.5);
    const Eigen::MatrixXd cov = population_covariance(scm);
    const double a = scm.coeffs(1, 0), b = scm.coeffs(2, 1);
    EXPECT_DOUBLE_EQ(cov(0, 0), scm.noise_std(0) * scm.noise_std(0));
    EXPECT_NEAR(cov(0, 1), a * cov(0, 0), 1e-15);
    EXPECT_NEAR(cov(0, 2), a * b * cov(0, 0), 1e-15);
    EXPECT_NEAR(cov(1, 1), a * a * cov(0, 0) + scm.noise_std(1) * scm.noise_std(1), 1e-15);
}

TEST(Sampling, LatentColumnsAreDropped) {
    const Scm scm = build_model("confounder_diamond");
    const Dataset data = sample(scm, 10, 1);
    EXPECT_EQ(data.columns, scm.observed_names());
    EXPECT_EQ(data.columns, (std::vector<std::string>{"X", "Y", "Z", "V"}));
    EXPECT_EQ(data.n(), 10);
}

TEST(Sampling, SameSeedSameData) {
    const Scm scm = build_model("five_node");
    EXPECT_EQ(sample(scm, 50, 9).values, sample(scm, 50, 9).values);
    EXPECT_NE(sample(scm, 50, 9).values, sample(scm, 50, 10).values);
}

TEST(Sampling, SampleCovarianceApproachesPopulation) {
    const int n = 100000;
    for (const char* id : {"five_node", "faithful_violation4", "confounder_diamond"}) {
        const Scm scm = build_model(id);
        const Dataset data = sample(scm, n, 2024);
        const Eigen::MatrixXd full = population_covariance(scm);
        const std::vector<NodeIndex> obs = scm.observed();
        const Eigen::MatrixXd centered = data.values.rowwise() - data.values.colwise().mean();
        const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n - 1);
        for (int i = 0; i < data.d(); ++i)
            for (int j = 0; j < data.d(); ++j) {
                const double s_ij = full(obs[i], obs[j]);
                const double se = std::sqrt((full(obs[i], obs[i]) * full(obs[j], obs[j]) + s_ij * s_ij) / n);
                EXPECT_LT(std::abs(cov(i, j) - s_ij), 5.0 * se) << id << " " << i << "," << j;
            }
    }
}

TEST(Sampling, CancelledPairTestsIndependentAtNominalRate) {
    const Scm scm = build_model("faithful_violation3");
    const int x = 0, y = 2;
    ASSERT_EQ(scm.names[y], "Y");
    int independent = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Dataset data = sample(scm, 10000, seed);
        if (FisherZTester(data).test(CITuple::make(x, y), 0.05).decision == Decision::Independent) ++independent;
    }
    EXPECT_GE(independent, 88);
}

TEST(Replicate, ThreadCountDoesNotChangeResults) {
    const Scm scm = build_model("mediated3", 10.0);
    RunConfig cfg;
    const ReplicationSummary one = replicate(scm, 50, 12, cfg, Resolution::DropConflicts, 7, 1);
    const ReplicationSummary many = replicate(scm, 50, 12, cfg, Resolution::DropConflicts, 7, 4);
    EXPECT_EQ(one.mean, many.mean);
    EXPECT_EQ(one.std_dev, many.std_dev);
    EXPECT_EQ(one.class_counts, many.class_counts);
    EXPECT_EQ(one.mean_conflicts, many.mean_conflicts);
    EXPECT_EQ(one.scored_reps, 12);
    EXPECT_EQ(one.class_counts[0] + one.class_counts[1] + one.class_counts[2], 12);
}

TEST(Replicate, SummaryMatchesPerRepetitionRuns) {
    const Scm scm = build_model("five_node", 1.0);
    RunConfig cfg;
    const int reps = 6, n = 80;
    const ReplicationSummary s = replicate(scm, n, reps, cfg, Resolution::DropConflicts, 100, 2);
    std::vector<double> totals;
    for (int rep = 0; rep < reps; ++rep) {
        const Dataset data = sample(scm, n, 100 + rep);
        const DiscoveryResult r = run_pc(FisherZTester(data), data.columns, cfg);
        totals.push_back(*score_report(r, Resolution::DropConflicts).score(ScoreVariant::StandardTotal));
    }
    double mean = 0.0, sq = 0.0;
    for (double t : totals) mean += t;
    mean /= reps;
    for (double t : totals) sq += (t - mean) * (t - mean);
    EXPECT_NEAR(*s.mean[0], mean, 1e-12);
    EXPECT_NEAR(*s.std_dev[0], std::sqrt(sq / reps), 1e-12);
}
