#include <gtest/gtest.h>

#include <random>

#include "coherencykit/citest.hpp"
#include "coherencykit/errors.hpp"
#include "coherencykit/separation.hpp"
#include "support.hpp"

using namespace ck;

namespace {

// Correlated Gaussian fixture: columns are random linear mixtures of iid
// normals, so every partial correlation is generic.
Dataset random_fixture(std::mt19937_64& rng, int n, int d) {
    std::normal_distribution<double> z;
    Eigen::MatrixXd mix(d, d), base(n, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) mix(i, j) = z(rng);
    for (int r = 0; r < n; ++r)
        for (int j = 0; j < d; ++j) base(r, j) = z(rng);
    return {cktest::letters(d), base * mix};
}

}  // namespace

TEST(PartialCorrelation, MatchesRegressionResidualOracle) {
    std::mt19937_64 rng(5150);
    for (int fixture = 0; fixture < 50; ++fixture) {
        const int d = 3 + fixture % 4;
        const Dataset data = random_fixture(rng, 40 + 7 * fixture, d);
        const Eigen::MatrixXd corr = correlation_matrix(data);
        for (const CITuple& t : cktest::all_tuples(d, d - 2)) {
            const double oracle = cktest::residual_partial_correlation(data.values, t);
            ASSERT_NEAR(partial_correlation(corr, data.n(), t), oracle, 1e-10) << to_string(t, data.columns);
        }
    }
}

TEST(PartialCorrelation, ClampedAwayFromOne) {
    Dataset data{{"A", "B"}, Eigen::MatrixXd(4, 2)};
    data.values << 1, 2, 2, 4, 3, 6, 4, 8;
    const double r = partial_correlation(data, CITuple::make(0, 1));
    EXPECT_EQ(r, 1.0 - kCorrelationClamp);
    const TestOutcome o = fisher_z_from_correlation(r, 1000, 0, 0.05);
    EXPECT_EQ(o.decision, Decision::Dependent);
    EXPECT_TRUE(std::isfinite(*o.statistic));
}

TEST(PartialCorrelation, DegenerateInputsThrow) {
    Dataset constant{{"A", "B"}, Eigen::MatrixXd(3, 2)};
    constant.values << 1, 5, 2, 5, 3, 5;
    EXPECT_THROW(correlation_matrix(constant), DegenerateDataError);
    Dataset tiny{{"A", "B"}, Eigen::MatrixXd(1, 2)};
    tiny.values << 1, 2;
    EXPECT_THROW(correlation_matrix(tiny), InsufficientSamplesError);
    EXPECT_THROW(fisher_z_from_correlation(0.1, 4, 2, 0.05), InsufficientSamplesError);
}

TEST(FisherZ, FrozenReferenceValues) {
    // Reference p-values computed with 30-digit arithmetic as erfc(sqrt(n-k-3)|atanh r| / sqrt 2).
    struct Case {
        double r;
        int n, k;
        double p;
    };
    for (const Case& c : {Case{0.1, 103, 0, 0.315690342345544402603},
                          Case{-0.25, 50, 2, 0.0866461043891228279824},
                          Case{0.02, 10003, 1, 0.0454822647057933679404}}) {
        const TestOutcome o = fisher_z_from_correlation(c.r, c.n, c.k, 0.05);
        EXPECT_NEAR(*o.p_value, c.p, 1e-14);
        EXPECT_EQ(o.decision, c.p > 0.05 ? Decision::Independent : Decision::Dependent);
    }
}

TEST(FisherZ, ZeroCorrelationGivesPValueOne) {
    const TestOutcome o = fisher_z_from_correlation(0.0, 100, 3, 0.05);
    EXPECT_EQ(*o.p_value, 1.0);
    EXPECT_EQ(*o.statistic, 0.0);
    EXPECT_EQ(o.decision, Decision::Independent);
}

TEST(FisherZ, DecisionIsPValueAboveAlpha) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-0.3, 0.3);
    for (int i = 0; i < 500; ++i) {
        const TestOutcome o = fisher_z_from_correlation(u(rng), 60, i % 3, 0.05);
        ASSERT_EQ(o.decision == Decision::Independent, *o.p_value > 0.05);
    }
}

TEST(FisherZ, SymmetricAndOrderInvariant) {
    std::mt19937_64 rng(17);
    const Dataset data = random_fixture(rng, 80, 5);
    const TestRecord a = fisher_z_test(data, CITuple::make(0, 3, {4, 1}), 0.05);
    const TestRecord b = fisher_z_test(data, CITuple::make(3, 0, {1, 4}), 0.05);
    EXPECT_EQ(*a.p_value, *b.p_value);
    EXPECT_EQ(a.decision, b.decision);
}

TEST(FisherZ, AffineRescalingLeavesPValuesUnchanged) {
    std::mt19937_64 rng(23);
    const Dataset data = random_fixture(rng, 120, 5);
    Dataset scaled = data;
    for (int j = 0; j < scaled.d(); ++j)
        scaled.values.col(j) = scaled.values.col(j).array() * (j % 2 ? -3.5 : 1e3) + 42.0 * j;
    const FisherZTester a(data), b(scaled);
    for (const CITuple& t : cktest::all_tuples(5, 3)) {
        const TestOutcome oa = a.test(t, 0.05), ob = b.test(t, 0.05);
        ASSERT_NEAR(*oa.p_value, *ob.p_value, 1e-9);
        ASSERT_EQ(oa.decision, ob.decision);
    }
}

TEST(Ledger, FirstResultWinsAndOrderIncreases) {
    TestLedger ledger(0.05);
    const CITuple t = CITuple::make(2, 0, {1});
    ledger.insert(t, {Decision::Independent, 0.4, 0.8}, Phase::Skeleton);
    const TestRecord& again = ledger.insert(CITuple::make(0, 2, {1}), {Decision::Dependent, 0.01, 3.0}, Phase::Orientation);
    EXPECT_TRUE(again.independent());
    EXPECT_EQ(again.phase, Phase::Skeleton);
    ledger.insert(CITuple::make(0, 1), {Decision::Dependent, 0.0, 9.0}, Phase::Skeleton);
    EXPECT_EQ(ledger.size(), 2u);
    EXPECT_EQ(ledger.independent_count() + ledger.dependent_count(), ledger.size());
    for (std::size_t i = 0; i < ledger.size(); ++i) EXPECT_EQ(ledger.records()[i].order, static_cast<int>(i));
    EXPECT_TRUE(ledger.contains(CITuple::make(1, 0)));
    EXPECT_THROW(TestLedger(1.5), std::invalid_argument);
}

TEST(Ledger, RecordRunsTesterOnlyOnMiss) {
    struct Counting final : Tester {
        mutable int calls = 0;
        TestOutcome test(const CITuple&, double) const override {
            ++calls;
            return {Decision::Dependent, 0.0, 1.0};
        }
        int num_vars() const override { return 3; }
    } tester;
    TestLedger ledger;
    ledger_record(ledger, tester, CITuple::make(0, 1, {2}));
    ledger_record(ledger, tester, CITuple::make(1, 0, {2}), Phase::Orientation);
    EXPECT_EQ(tester.calls, 1);
    EXPECT_EQ(ledger.records()[0].phase, Phase::Skeleton);
}

TEST(Oracles, GraphOracleAnswersObservedMargin) {
    // U is latent: X <- U -> Y, so X and Y are dependent marginally.
    MixedGraph dag({"X", "Y", "U"});
    dag.add_directed(2, 0);
    dag.add_directed(2, 1);
    const GraphOracleTester tester(dag, {0, 1});
    EXPECT_EQ(tester.num_vars(), 2);
    EXPECT_EQ(tester.test(CITuple::make(0, 1), 0.05).decision, Decision::Dependent);
    const GraphOracleTester full(dag);
    EXPECT_EQ(full.test(CITuple::make(0, 1, {2}), 0.05).decision, Decision::Independent);
    EXPECT_FALSE(full.test(CITuple::make(0, 1, {2}), 0.05).p_value.has_value());
}

TEST(Oracles, GraphOracleIsSymmetricOnRandomDags) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 30; ++trial) {
        const MixedGraph g = cktest::random_dag(5, 0.4, rng);
        for (const CITuple& t : cktest::all_tuples(5, 3)) {
            const TestRecord a = graph_oracle_test(g, t, 0.05);
            const TestRecord b = graph_oracle_test(g, CITuple::make(t.y, t.x, t.s), 0.05);
            ASSERT_EQ(a.decision, b.decision);
            ASSERT_EQ(a.independent(), d_separated(g, t));
        }
    }
}

TEST(Oracles, RelationOracleListsIndependencies) {
    const RelationOracleTester tester(3, {CITuple::make(0, 2)});
    EXPECT_EQ(tester.test(CITuple::make(2, 0), 0.05).decision, Decision::Independent);
    EXPECT_EQ(tester.test(CITuple::make(0, 2, {1}), 0.05).decision, Decision::Dependent);
}
