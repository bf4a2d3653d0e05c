#pragma once

#include <array>
#include <filesystem>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace attachnet {

enum class Gender { female, male, other, unknown };
enum class Region { Africa, NorthAmerica, SouthAmerica, Asia, Europe, Oceania, Unknown };

std::string_view to_string(Gender g);
std::string_view to_string(Region r);
std::optional<Gender> parse_gender_name(std::string_view s);
std::optional<Region> parse_region_name(std::string_view s);

// Continental region for an ISO 3166-1 alpha-2 code (case-insensitive).
// Unrecognized or empty codes map to Region::Unknown.
Region map_region(std::string_view country_code);

struct Demographics {
    std::optional<int> age;
    Gender gender = Gender::unknown;
    std::string country;  // canonical upper-case alpha-2, empty when absent
    Region region = Region::Unknown;

    friend bool operator==(const Demographics&, const Demographics&) = default;
};

// Missing responses are stored as quiet NaN.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
inline bool is_missing(double v) { return v != v; }

// Rectangular n x m response matrix (row-major) plus per-row demographics.
class ResponseTable {
public:
    ResponseTable() = default;
    explicit ResponseTable(std::vector<std::string> items);

    const std::vector<std::string>& items() const { return items_; }
    std::size_t item_count() const { return items_.size(); }
    std::size_t row_count() const { return demographics_.size(); }

    double at(std::size_t row, std::size_t item) const { return values_[row * items_.size() + item]; }
    const Demographics& demographics(std::size_t row) const { return demographics_[row]; }
    std::vector<double> row(std::size_t r) const;
    std::vector<double> column(std::size_t item) const;

    std::optional<std::size_t> item_index(std::string_view id) const;

    void add_row(const std::vector<double>& values, Demographics demo);

    // True when every response is present.
    bool complete() const;

    friend bool operator==(const ResponseTable& a, const ResponseTable& b);

private:
    std::vector<std::string> items_;
    std::vector<double> values_;
    std::vector<Demographics> demographics_;
};

// Maps raw codes found in survey exports to canonical values. Loaded from a
// key=value text file:
//   gender.1 = male
//   country.UK = GB
struct Codebook {
    std::map<std::string, Gender> gender;
    std::map<std::string, std::string> country_alias;

    // Codes published for the openpsychometrics ECR export (1 male, 2 female, 3 other).
    static Codebook ecr_default();
    static Codebook parse(std::istream& in);
    static Codebook load(const std::filesystem::path& path);

    Gender gender_of(std::string_view raw) const;
    std::string country_of(std::string_view raw) const;
};

struct ParseSchema {
    std::string age_column = "age";
    std::string gender_column = "gender";
    std::string country_column = "country";
    Codebook codebook = Codebook::ecr_default();
};

struct RowIssue {
    std::size_t line;
    std::string message;
};

struct ParsedResponses {
    ResponseTable table;
    std::vector<RowIssue> dropped_rows;
};

// Canonical item id: "q7", "Q7", "Q07" -> "Q07". Empty when not an item column.
std::string canonical_item_id(std::string_view column_name);

ParsedResponses parse_responses(std::istream& in, const ParseSchema& schema = {});
ParsedResponses parse_responses_file(const std::filesystem::path& path, const ParseSchema& schema = {});

// Canonical CSV: zero-padded item columns, then age,gender,country.
void write_responses(std::ostream& out, const ResponseTable& table);

struct AgeRange {
    int lo;
    int hi;
};

struct CohortFilter {
    std::optional<AgeRange> age_range;
    std::optional<std::set<Gender>> genders;
    std::optional<std::set<Region>> regions;
    bool require_complete = false;
    double min_response = 1.0;
    double max_response = 5.0;

    // Ages 18-60, female/male, any known region, complete responses in [1,5].
    static CohortFilter standard();
};

// Throws ValidationError if lo > hi and EmptyCohortError if no row survives.
ResponseTable filter_cohort(const ResponseTable& table, const CohortFilter& filter);

inline constexpr std::array<AgeRange, 4> kAgeBands{{{18, 20}, {21, 30}, {31, 40}, {41, 60}}};

struct DemographicReport {
    // Keyed by (dimension, group), dimension in {"region", "gender", "age"}.
    // Every row is counted once per dimension; rows outside the fixed age bands
    // land in the "other" age group.
    std::map<std::pair<std::string, std::string>, std::size_t> counts;
    std::size_t rows = 0;

    std::size_t count(const std::string& dimension, const std::string& group) const;
    std::size_t dimension_total(const std::string& dimension) const;
};

DemographicReport demographic_summary(const ResponseTable& table);

// Printable report with the Americas merged into one row.
void print_demographics(std::ostream& out, const DemographicReport& report);

}  // namespace attachnet
