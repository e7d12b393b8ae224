#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "coherencykit/cli.hpp"
#include "coherencykit/dataset.hpp"
#include "coherencykit/errors.hpp"
#include "coherencykit/graph_io.hpp"
#include "coherencykit/report.hpp"

using namespace ck;

namespace {

int parse_error_line(const std::string& text, const LoadOptions& opts = {}) {
    try {
        parse_table(text, opts);
    } catch (const ParseError& e) {
        return e.line();
    }
    return -1;
}

// First rows of the UCI file layout: whitespace separated, quoted car name,
// `?` for a missing horsepower.
constexpr const char* kUciRows =
    "18.0   8   307.0      130.0      3504.      12.0   70  1\t\"chevrolet chevelle malibu\"\n"
    "15.0   8   350.0      165.0      3693.      11.5   70  1\t\"buick skylark 320\"\n"
    "25.0   4   98.0       ?          2046.      19.0   71  1\t\"ford pinto\"\n";

}  // namespace

TEST(Table, HeaderedCsv) {
    const LoadedTable t = parse_table("a, b ,c\n1,2,3\n4,5,6\n");
    EXPECT_EQ(t.data.columns, (std::vector<std::string>{"a", "b", "c"}));
    EXPECT_EQ(t.data.n(), 2);
    EXPECT_EQ(t.data.values(1, 2), 6.0);
}

TEST(Table, HeaderlessGetsDefaultNames) {
    const LoadedTable t = parse_table("1 2\n3 4\n");
    EXPECT_EQ(t.data.columns, (std::vector<std::string>{"V1", "V2"}));
    EXPECT_EQ(t.data.n(), 2);
}

TEST(Table, MissingCellsDropRowsOrFail) {
    const std::string text = "a,b\n1,2\nNA,3\n4,\n5,?\n6,7\n";
    const LoadedTable t = parse_table(text);
    EXPECT_EQ(t.rows_read, 5);
    EXPECT_EQ(t.rows_dropped, 3);
    EXPECT_EQ(t.data.n(), 2);
    LoadOptions strict;
    strict.missing = MissingPolicy::Error;
    EXPECT_EQ(parse_error_line(text, strict), 3);
}

TEST(Table, ColumnSelectionKeepsRequestedOrder) {
    LoadOptions opts;
    opts.columns = std::vector<std::string>{"c", "a"};
    const LoadedTable t = parse_table("a,b,c\n1,x,3\n", opts);
    EXPECT_EQ(t.data.columns, (std::vector<std::string>{"c", "a"}));
    EXPECT_EQ(t.data.values(0, 0), 3.0);
    opts.columns = std::vector<std::string>{"zz"};
    EXPECT_THROW(parse_table("a,b\n1,2\n", opts), ParseError);
}

TEST(Table, ErrorsCarryLineNumbers) {
    EXPECT_EQ(parse_error_line("a,b\n1,2\n\n1,2,3\n"), 4);
    EXPECT_EQ(parse_error_line("a,b\n1,oops\n"), 2);
    EXPECT_EQ(parse_error_line("a,b\n1,\"2\n"), 2);
    EXPECT_EQ(parse_error_line("a,a\n1,2\n"), 1);
    EXPECT_THROW(parse_table(""), ParseError);
    EXPECT_THROW(parse_table("a,b\nNA,1\n"), DegenerateDataError);
}

TEST(Table, RawAutoMpgLayout) {
    LoadOptions opts;
    opts.columns = auto_mpg_selection();
    opts.header = auto_mpg_columns();
    const LoadedTable t = parse_table(kUciRows, opts);
    EXPECT_EQ(t.data.columns, auto_mpg_selection());
    EXPECT_EQ(t.rows_read, 3);
    EXPECT_EQ(t.rows_dropped, 1);
    EXPECT_EQ(t.data.values(0, 0), 18.0);
    EXPECT_EQ(t.data.values(1, 4), 3693.0);
}

TEST(Table, LoadAutoMpgFromFile) {
    const auto path = std::filesystem::temp_directory_path() / "coherencykit_auto_mpg_fixture.data";
    std::ofstream(path) << kUciRows;
    const LoadedTable t = load_auto_mpg(path.string());
    EXPECT_EQ(t.data.n(), 2);
    EXPECT_EQ(t.data.d(), 6);
    std::filesystem::remove(path);
    EXPECT_THROW(load_auto_mpg(path.string()), Error);
}

TEST(Table, HashDependsOnNamesAndValues) {
    const Dataset a = parse_table("a,b\n1,2\n").data;
    const Dataset b = parse_table("a,c\n1,2\n").data;
    const Dataset c = parse_table("a,b\n1,2.5\n").data;
    EXPECT_EQ(dataset_hash(a), dataset_hash(parse_table("a , b\n1,2\n").data));
    EXPECT_NE(dataset_hash(a), dataset_hash(b));
    EXPECT_NE(dataset_hash(a), dataset_hash(c));
}

TEST(Report, ScoreTableLayout) {
    const MixedGraph g = parse_edge_list("A -- B\n");
    TestLedger ledger;
    ledger.insert(CITuple::make(0, 1), {Decision::Independent, 0.2, 0.1}, Phase::Skeleton);
    ScoreReport r = score_graph(g, ledger);
    r.resolution = Resolution::DropConflicts;
    const std::string csv = score_reports_csv({r});
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "score,drop-conflicts");
    EXPECT_NE(csv.find("standard_total,0.0000\n"), std::string::npos);
    EXPECT_NE(csv.find("class,G2\n"), std::string::npos);
    const nlohmann::json j = score_report_to_json(r, g.names());
    EXPECT_EQ(j["scores"]["standard_total"], 0.0);
    EXPECT_EQ(j["faithfulness_incoherent"].size(), 1u);
}

TEST(Report, RoundsToFourDecimals) {
    EXPECT_EQ(round4(0.123456), 0.1235);
    EXPECT_EQ(round4(1.0), 1.0);
}

TEST(Cli, SeedResolution) {
    EXPECT_EQ(resolve_seed(5), 5u);
    ::setenv("COHERENCYKIT_SEED", "77", 1);
    EXPECT_EQ(resolve_seed(std::nullopt), 77u);
    EXPECT_EQ(resolve_seed(3), 3u);
    ::setenv("COHERENCYKIT_SEED", "7x", 1);
    EXPECT_THROW(resolve_seed(std::nullopt), std::invalid_argument);
    ::unsetenv("COHERENCYKIT_SEED");
    EXPECT_EQ(resolve_seed(std::nullopt), 0u);
}

TEST(Cli, OrderParsing) {
    const std::vector<std::string> names{"X", "Y", "Z"};
    EXPECT_TRUE(parse_order("default", names).empty());
    EXPECT_EQ(parse_order("Z,X,Y", names), (std::vector<NodeIndex>{2, 0, 1}));
    EXPECT_THROW(parse_order("Z,X", names), std::invalid_argument);
    EXPECT_THROW(parse_order("Z,X,Q", names), std::invalid_argument);
}

TEST(Cli, DsepAnswersEachQueryLine) {
    const MixedGraph g = parse_edge_list("A -> B\nC -> B\n");
    const auto answers = cmd_dsep(g, "# comment\nA C\n\nA C | B   # opens the collider\n");
    ASSERT_EQ(answers.size(), 2u);
    EXPECT_EQ(answers[0].query, "A C");
    EXPECT_TRUE(answers[0].separated);
    EXPECT_EQ(answers[1].query, "A C | B");
    EXPECT_FALSE(answers[1].separated);
    try {
        cmd_dsep(g, "A C\nA Q\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2);
    }
}

TEST(Cli, DiscoverOracleModelBundle) {
    DiscoverOptions opts;
    opts.model = "confounder_diamond";
    opts.oracle = true;
    const DiscoverOutput out = cmd_discover(opts);
    EXPECT_EQ(out.result.conflict_count(), 4);
    ASSERT_EQ(out.reports.size(), 1u);
    EXPECT_FALSE(out.reports[0].scored());
    EXPECT_EQ(out.warnings.size(), 1u);
    EXPECT_EQ(out.bundle["provenance"]["source"], "oracle");
    EXPECT_EQ(out.bundle["reports"][0]["class"], "G1");
    EXPECT_TRUE(out.bundle["reports"][0]["scores"].is_null());
}

TEST(Cli, DiscoverSampledModelIsSeeded) {
    DiscoverOptions opts;
    opts.model = "five_node";
    opts.n = 200;
    opts.config.seed = 11;
    opts.resolutions = {Resolution::DropConflicts};
    const DiscoverOutput a = cmd_discover(opts);
    const DiscoverOutput b = cmd_discover(opts);
    EXPECT_EQ(a.bundle, b.bundle);
    EXPECT_TRUE(a.reports[0].scored());
    EXPECT_THROW(cmd_discover(DiscoverOptions{}), Error);
}

TEST(Cli, ReplicateOneRowPerSampleSize) {
    ReplicateOptions opts;
    opts.model = "mediated3";
    opts.sample_sizes = {50, 100};
    opts.reps = 4;
    opts.threads = 2;
    const auto rows = cmd_replicate(opts);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[1].n, 100);
    const std::string csv = replication_grid_csv(rows);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "score,n=50,n=100");
    EXPECT_NE(csv.find("mean_conflicts,"), std::string::npos);
}
