#include "coherencykit/citest.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "coherencykit/errors.hpp"
#include "coherencykit/separation.hpp"

namespace ck {

int Dataset::column_index(const std::string& name) const {
    auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw std::invalid_argument("unknown column '" + name + "'");
    return static_cast<int>(it - columns.begin());
}

const char* to_string(Decision d) { return d == Decision::Independent ? "independent" : "dependent"; }
const char* to_string(Phase p) { return p == Phase::Skeleton ? "skeleton" : "orientation"; }

TestLedger::TestLedger(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
}

const TestRecord* TestLedger::find(const CITuple& t) const {
    auto it = index_.find(t);
    return it == index_.end() ? nullptr : &records_[it->second];
}

const TestRecord& TestLedger::insert(const CITuple& t, const TestOutcome& outcome, Phase phase) {
    if (const TestRecord* r = find(t)) return *r;
    TestRecord rec{t, outcome.decision, outcome.p_value, outcome.statistic, phase, static_cast<int>(records_.size())};
    index_.emplace(t, records_.size());
    records_.push_back(std::move(rec));
    return records_.back();
}

std::size_t TestLedger::independent_count() const {
    return static_cast<std::size_t>(
        std::count_if(records_.begin(), records_.end(), [](const TestRecord& r) { return r.independent(); }));
}

const TestRecord& ledger_record(TestLedger& ledger, const Tester& tester, const CITuple& t, Phase phase) {
    if (const TestRecord* r = ledger.find(t)) return *r;
    return ledger.insert(t, tester.test(t, ledger.alpha()), phase);
}

Eigen::MatrixXd correlation_matrix(const Dataset& data) {
    if (data.n() < 2) throw InsufficientSamplesError("need at least two samples for a correlation");
    Eigen::MatrixXd centered = data.values.rowwise() - data.values.colwise().mean();
    Eigen::MatrixXd cov = centered.transpose() * centered;
    Eigen::VectorXd sd = cov.diagonal().cwiseSqrt();
    for (Eigen::Index i = 0; i < sd.size(); ++i)
        if (!(sd(i) > 0.0))
            throw DegenerateDataError("column '" + data.columns.at(static_cast<std::size_t>(i)) + "' is constant");
    Eigen::MatrixXd corr = sd.cwiseInverse().asDiagonal() * cov * sd.cwiseInverse().asDiagonal();
    corr.diagonal().setOnes();
    return corr;
}

double partial_correlation(const Eigen::MatrixXd& corr, int n, const CITuple& t) {
    const int k = static_cast<int>(t.s.size());
    if (k > n - 2) throw InsufficientSamplesError("conditioning set too large for the sample size");
    double r;
    if (k == 0) {
        r = corr(t.x, t.y);
    } else {
        std::vector<NodeIndex> idx{t.x, t.y};
        idx.insert(idx.end(), t.s.begin(), t.s.end());
        const auto m = static_cast<Eigen::Index>(idx.size());
        Eigen::MatrixXd sub(m, m);
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j < m; ++j) sub(i, j) = corr(idx[i], idx[j]);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
        if (!lu.isInvertible()) throw DegenerateDataError("correlation submatrix is singular");
        Eigen::MatrixXd prec = lu.inverse();
        const double denom = prec(0, 0) * prec(1, 1);
        if (!(denom > 0.0)) throw DegenerateDataError("correlation submatrix is not positive definite");
        r = -prec(0, 1) / std::sqrt(denom);
    }
    if (!std::isfinite(r)) throw DegenerateDataError("partial correlation is not finite");
    const double lim = 1.0 - kCorrelationClamp;
    return std::clamp(r, -lim, lim);
}

double partial_correlation(const Dataset& data, const CITuple& t) {
    return partial_correlation(correlation_matrix(data), data.n(), t);
}

TestOutcome fisher_z_from_correlation(double r, int n, int cond_size, double alpha) {
    const int dof = n - cond_size - 3;
    if (dof < 1) throw InsufficientSamplesError("Fisher-Z needs n - |S| - 3 >= 1");
    const double z = std::atanh(r);
    const double stat = std::sqrt(static_cast<double>(dof)) * std::abs(z);
    // 2 (1 - Phi(s)) = erfc(s / sqrt 2); erfc keeps full relative precision in the tail.
    const double p = std::erfc(stat / std::numbers::sqrt2);
    return {p > alpha ? Decision::Independent : Decision::Dependent, p, stat};
}

TestRecord fisher_z_test(const Dataset& data, const CITuple& t, double alpha) {
    const double r = partial_correlation(data, t);
    TestOutcome o = fisher_z_from_correlation(r, data.n(), static_cast<int>(t.s.size()), alpha);
    return {t, o.decision, o.p_value, o.statistic, Phase::Skeleton, 0};
}

TestRecord graph_oracle_test(const MixedGraph& dag, const CITuple& t, double alpha) {
    (void)alpha;
    return {t, d_separated(dag, t) ? Decision::Independent : Decision::Dependent, std::nullopt, std::nullopt,
            Phase::Skeleton, 0};
}

TestRecord relation_oracle_test(const std::set<CITuple>& independencies, const CITuple& t, double alpha) {
    (void)alpha;
    return {t, independencies.contains(t) ? Decision::Independent : Decision::Dependent, std::nullopt, std::nullopt,
            Phase::Skeleton, 0};
}

FisherZTester::FisherZTester(const Dataset& data) : corr_(correlation_matrix(data)), n_(data.n()) {}

TestOutcome FisherZTester::test(const CITuple& t, double alpha) const {
    const double r = partial_correlation(corr_, n_, t);
    return fisher_z_from_correlation(r, n_, static_cast<int>(t.s.size()), alpha);
}

GraphOracleTester::GraphOracleTester(MixedGraph dag, std::vector<NodeIndex> observed)
    : dag_(std::move(dag)), observed_(std::move(observed)) {
    if (!dag_.is_dag()) throw InvalidGraphError("graph oracle needs a DAG");
    if (observed_.empty())
        for (NodeIndex i = 0; i < dag_.size(); ++i) observed_.push_back(i);
    for (NodeIndex v : observed_)
        if (v < 0 || v >= dag_.size()) throw std::out_of_range("observed node outside the DAG");
}

TestOutcome GraphOracleTester::test(const CITuple& t, double alpha) const {
    std::vector<NodeIndex> s;
    for (NodeIndex v : t.s) s.push_back(observed_.at(v));
    CITuple mapped = CITuple::make(observed_.at(t.x), observed_.at(t.y), s);
    return {graph_oracle_test(dag_, mapped, alpha).decision, std::nullopt, std::nullopt};
}

RelationOracleTester::RelationOracleTester(int num_vars, std::set<CITuple> independencies)
    : d_(num_vars), independencies_(std::move(independencies)) {}

TestOutcome RelationOracleTester::test(const CITuple& t, double alpha) const {
    return {relation_oracle_test(independencies_, t, alpha).decision, std::nullopt, std::nullopt};
}

}  // namespace ck
