#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "coherencykit/citest.hpp"
#include "coherencykit/coherency.hpp"
#include "coherencykit/discovery.hpp"
#include "coherencykit/simulate.hpp"

namespace ck {

inline constexpr const char* kToolVersion = "0.1.0";

// Scores are exported at four decimals.
double round4(double v);

nlohmann::json ledger_to_json(const TestLedger& ledger, const std::vector<std::string>& names);
nlohmann::json config_to_json(const RunConfig& cfg, const std::vector<std::string>& names);
nlohmann::json discovery_to_json(const DiscoveryResult& result);
nlohmann::json score_report_to_json(const ScoreReport& report, const std::vector<std::string>& names);
nlohmann::json replication_to_json(const ReplicationSummary& s);

// One row per score variant, one column per report.
std::string score_reports_csv(const std::vector<ScoreReport>& reports);

// One row per score variant plus mean conflicts, one column per sample size;
// cells read "mean (std)".
std::string replication_grid_csv(const std::vector<ReplicationSummary>& rows);

}  // namespace ck
