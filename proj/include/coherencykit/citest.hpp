#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "coherencykit/graph.hpp"

namespace ck {

struct Dataset {
    std::vector<std::string> columns;
    Eigen::MatrixXd values;  // n rows x d columns

    int n() const { return static_cast<int>(values.rows()); }
    int d() const { return static_cast<int>(values.cols()); }
    int column_index(const std::string& name) const;
};

enum class Decision { Independent, Dependent };
enum class Phase { Skeleton, Orientation };

const char* to_string(Decision d);
const char* to_string(Phase p);

struct TestOutcome {
    Decision decision = Decision::Dependent;
    std::optional<double> p_value;
    std::optional<double> statistic;
};

struct TestRecord {
    CITuple tuple;
    Decision decision = Decision::Dependent;
    std::optional<double> p_value;
    std::optional<double> statistic;
    Phase phase = Phase::Skeleton;
    int order = 0;

    bool independent() const { return decision == Decision::Independent; }
};

class Tester {
public:
    virtual ~Tester() = default;
    virtual TestOutcome test(const CITuple& t, double alpha) const = 0;
    virtual int num_vars() const = 0;
};

/// Every statement tested during one run, in first-test order. A tuple is
/// stored once; later queries get the stored record back.
class TestLedger {
public:
    explicit TestLedger(double alpha = 0.05);

    double alpha() const noexcept { return alpha_; }
    std::size_t size() const noexcept { return records_.size(); }
    bool empty() const noexcept { return records_.empty(); }
    const std::vector<TestRecord>& records() const noexcept { return records_; }

    const TestRecord* find(const CITuple& t) const;
    bool contains(const CITuple& t) const { return find(t) != nullptr; }

    // Stores `outcome` for t unless t is already present; returns the stored record.
    const TestRecord& insert(const CITuple& t, const TestOutcome& outcome, Phase phase);

    std::size_t independent_count() const;
    std::size_t dependent_count() const { return size() - independent_count(); }

private:
    double alpha_;
    std::vector<TestRecord> records_;
    std::map<CITuple, std::size_t> index_;
};

// Returns the stored record for t, running the tester only on a miss.
const TestRecord& ledger_record(TestLedger& ledger, const Tester& tester, const CITuple& t,
                                Phase phase = Phase::Skeleton);

inline constexpr double kCorrelationClamp = 1e-12;

Eigen::MatrixXd correlation_matrix(const Dataset& data);

// Partial correlation of x and y given s from the inverse of the correlation
// submatrix, clamped to [-(1 - 1e-12), 1 - 1e-12].
double partial_correlation(const Dataset& data, const CITuple& t);
double partial_correlation(const Eigen::MatrixXd& corr, int n, const CITuple& t);

// z = atanh(r), statistic = sqrt(n - |S| - 3) |z|, p = 2 (1 - Phi(statistic)).
TestOutcome fisher_z_from_correlation(double r, int n, int cond_size, double alpha);
TestRecord fisher_z_test(const Dataset& data, const CITuple& t, double alpha);
TestRecord graph_oracle_test(const MixedGraph& dag, const CITuple& t, double alpha);
TestRecord relation_oracle_test(const std::set<CITuple>& independencies, const CITuple& t, double alpha);

// Fisher-Z over a fixed dataset; the correlation matrix is computed once.
class FisherZTester final : public Tester {
public:
    explicit FisherZTester(const Dataset& data);
    TestOutcome test(const CITuple& t, double alpha) const override;
    int num_vars() const override { return static_cast<int>(corr_.cols()); }

private:
    Eigen::MatrixXd corr_;
    int n_;
};

// d-separation in a DAG. `observed` maps the tester's variable indices to
// DAG nodes, which lets a DAG with latent nodes answer for its observed margin.
class GraphOracleTester final : public Tester {
public:
    explicit GraphOracleTester(MixedGraph dag, std::vector<NodeIndex> observed = {});
    TestOutcome test(const CITuple& t, double alpha) const override;
    int num_vars() const override { return static_cast<int>(observed_.size()); }
    const MixedGraph& dag() const noexcept { return dag_; }

private:
    MixedGraph dag_;
    std::vector<NodeIndex> observed_;
};

// Independent exactly for the listed tuples.
class RelationOracleTester final : public Tester {
public:
    RelationOracleTester(int num_vars, std::set<CITuple> independencies);
    TestOutcome test(const CITuple& t, double alpha) const override;
    int num_vars() const override { return d_; }

private:
    int d_;
    std::set<CITuple> independencies_;
};

}  // namespace ck
