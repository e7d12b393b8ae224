#include "coherencykit/dataset.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include "coherencykit/errors.hpp"

namespace ck {

const std::vector<std::string>& auto_mpg_columns() {
    static const std::vector<std::string> cols{"mpg",          "cylinders",  "displacement", "horsepower", "weight",
                                               "acceleration", "model_year", "origin",       "car_name"};
    return cols;
}

const std::vector<std::string>& auto_mpg_selection() {
    static const std::vector<std::string> cols{"mpg",    "cylinders",   "displacement",
                                               "horsepower", "weight", "acceleration"};
    return cols;
}

namespace {

std::vector<std::string> split_line(std::string_view line, bool comma) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false, have = false;
    auto flush = [&] {
        out.push_back(cur);
        cur.clear();
        have = false;
    };
    for (char ch : line) {
        if (ch == '"') {
            quoted = !quoted;
            have = true;
        } else if (!quoted && comma && ch == ',') {
            flush();
        } else if (!quoted && !comma && (ch == ' ' || ch == '\t')) {
            if (have) flush();
        } else if (ch != '\r') {
            cur.push_back(ch);
            have = true;
        }
    }
    if (quoted) throw ParseError("unterminated quote", 0);
    if (comma || have) flush();
    if (comma)
        for (auto& cell : out) {
            const auto b = cell.find_first_not_of(" \t");
            const auto e = cell.find_last_not_of(" \t");
            cell = b == std::string::npos ? std::string() : cell.substr(b, e - b + 1);
        }
    return out;
}

bool is_missing(const std::string& cell) { return cell.empty() || cell == "?" || cell == "NA"; }

std::optional<double> to_number(const std::string& cell) {
    double v = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) return std::nullopt;
    return v;
}

}  // namespace

LoadedTable parse_table(std::string_view text, const LoadOptions& options) {
    std::vector<std::pair<int, std::string_view>> lines;
    std::size_t pos = 0;
    int line_no = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        ++line_no;
        std::string_view l = text.substr(pos, nl - pos);
        pos = nl + 1;
        if (l.find_first_not_of(" \t\r") != std::string_view::npos) lines.emplace_back(line_no, l);
    }
    if (lines.empty()) throw ParseError("table is empty", 0);
    const bool comma = lines.front().second.find(',') != std::string_view::npos;

    auto cells_of = [&](const std::pair<int, std::string_view>& l) {
        try {
            return split_line(l.second, comma);
        } catch (const ParseError& e) {
            throw ParseError(e.what(), l.first);
        }
    };

    std::vector<std::string> first = cells_of(lines.front());
    const bool has_header =
        std::any_of(first.begin(), first.end(), [](const std::string& c) { return !is_missing(c); }) &&
        std::none_of(first.begin(), first.end(), [](const std::string& c) { return to_number(c).has_value(); });
    std::vector<std::string> names;
    std::size_t body = 0;
    if (has_header) {
        names = first;
        body = 1;
    } else if (options.header) {
        names = *options.header;
    } else {
        for (std::size_t i = 0; i < first.size(); ++i) names.push_back("V" + std::to_string(i + 1));
    }
    for (std::size_t i = 0; i < names.size(); ++i)
        for (std::size_t j = i + 1; j < names.size(); ++j)
            if (names[i] == names[j]) throw ParseError("duplicate column '" + names[i] + "'", has_header ? lines[0].first : 0);

    std::vector<std::size_t> keep;
    std::vector<std::string> kept_names;
    if (options.columns) {
        for (const auto& c : *options.columns) {
            auto it = std::find(names.begin(), names.end(), c);
            if (it == names.end()) throw ParseError("unknown column '" + c + "'", 0);
            keep.push_back(static_cast<std::size_t>(it - names.begin()));
            kept_names.push_back(c);
        }
    } else {
        for (std::size_t i = 0; i < names.size(); ++i) keep.push_back(i);
        kept_names = names;
    }

    LoadedTable out;
    std::vector<std::vector<double>> rows;
    for (std::size_t li = body; li < lines.size(); ++li) {
        std::vector<std::string> cells = cells_of(lines[li]);
        ++out.rows_read;
        if (cells.size() != names.size())
            throw ParseError("expected " + std::to_string(names.size()) + " cells, found " +
                                 std::to_string(cells.size()),
                             lines[li].first);
        std::vector<double> row;
        bool missing = false;
        for (std::size_t k : keep) {
            if (is_missing(cells[k])) {
                missing = true;
                continue;
            }
            auto v = to_number(cells[k]);
            if (!v)
                throw ParseError("non-numeric cell '" + cells[k] + "' in column '" + names[k] + "'", lines[li].first);
            row.push_back(*v);
        }
        if (missing) {
            if (options.missing == MissingPolicy::Error)
                throw ParseError("missing value", lines[li].first);
            ++out.rows_dropped;
            continue;
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw DegenerateDataError("no complete rows remain");
    out.data.columns = kept_names;
    out.data.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < keep.size(); ++c)
            out.data.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    return out;
}

LoadedTable load_csv(const std::string& path, const LoadOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open data file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_table(buf.str(), options);
}

LoadedTable load_auto_mpg(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open Auto MPG file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    LoadOptions opts;
    opts.columns = auto_mpg_selection();
    opts.missing = MissingPolicy::DropRows;
    opts.header = auto_mpg_columns();  // used only by the headerless UCI file
    return parse_table(text, opts);
}

std::uint64_t dataset_hash(const Dataset& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&](const void* p, std::size_t n) {
        const auto* b = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= b[i];
            h *= 0x100000001b3ULL;
        }
    };
    for (const auto& c : data.columns) {
        feed(c.data(), c.size());
        feed("\0", 1);
    }
    for (Eigen::Index r = 0; r < data.values.rows(); ++r)
        for (Eigen::Index c = 0; c < data.values.cols(); ++c) {
            const std::uint64_t bits = std::bit_cast<std::uint64_t>(data.values(r, c));
            feed(&bits, sizeof bits);
        }
    return h;
}

}  // namespace ck
