#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coherencykit/citest.hpp"

namespace ck {

enum class MissingPolicy { DropRows, Error };

// Column layout of the UCI auto-mpg.data file, which ships without a header.
const std::vector<std::string>& auto_mpg_columns();
// The six continuous columns used for discovery.
const std::vector<std::string>& auto_mpg_selection();

struct LoadOptions {
    std::optional<std::vector<std::string>> columns;  // subset to keep, in this order
    MissingPolicy missing = MissingPolicy::DropRows;
    // Names for a file without a header row; ignored when a header is present.
    std::optional<std::vector<std::string>> header;
};

struct LoadedTable {
    Dataset data;
    int rows_read = 0;
    int rows_dropped = 0;
};

/// Parses a comma- or whitespace-delimited numeric table. Double-quoted fields
/// may contain the delimiter. A first line without any numeric cell is taken
/// as the header; otherwise names come from options.header or default to V1..Vd.
/// `?`, `NA` and empty cells are missing.
LoadedTable parse_table(std::string_view text, const LoadOptions& options = {});
LoadedTable load_csv(const std::string& path, const LoadOptions& options = {});

// Reads the Auto MPG file (headered or raw UCI layout), drops rows with
// missing entries and keeps the six continuous columns.
LoadedTable load_auto_mpg(const std::string& path);

// 64-bit FNV-1a over column names and the bit patterns of all values.
std::uint64_t dataset_hash(const Dataset& data);

}  // namespace ck
