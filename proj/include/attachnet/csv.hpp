#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace attachnet::csv {

// Tab if the header line contains a tab, comma otherwise.
char detect_delimiter(std::string_view header_line);

// Splits one record; double-quoted fields may contain the delimiter and "" escapes.
std::vector<std::string> split(std::string_view line, char delim);

std::string_view trim(std::string_view s);

std::optional<double> parse_double(std::string_view s);
std::optional<long> parse_int(std::string_view s);

// Shortest representation that round-trips exactly.
std::string format_double(double x);

// Fixed-point rendering for human-facing reports.
std::string format_fixed(double x, int decimals);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;  // 1-based source line of each row

    // Index of a header column; throws ValidationError if absent.
    std::size_t column(std::string_view name) const;
    std::optional<std::size_t> find_column(std::string_view name) const;
};

// Reads a delimited table with a header row. Blank lines are skipped; rows whose
// width differs from the header are rejected with ParseError.
Table read(std::istream& in);
Table read_file(const std::filesystem::path& path);

}  // namespace attachnet::csv
