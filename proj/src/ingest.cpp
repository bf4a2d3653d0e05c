#include "attachnet/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "attachnet/csv.hpp"
#include "attachnet/error.hpp"

namespace attachnet {
namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string upper(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

int item_number(const std::string& id) { return std::stoi(id.substr(1)); }

}  // namespace

std::string_view to_string(Gender g) {
    switch (g) {
        case Gender::female: return "female";
        case Gender::male: return "male";
        case Gender::other: return "other";
        case Gender::unknown: return "unknown";
    }
    return "unknown";
}

std::string_view to_string(Region r) {
    switch (r) {
        case Region::Africa: return "Africa";
        case Region::NorthAmerica: return "NorthAmerica";
        case Region::SouthAmerica: return "SouthAmerica";
        case Region::Asia: return "Asia";
        case Region::Europe: return "Europe";
        case Region::Oceania: return "Oceania";
        case Region::Unknown: return "Unknown";
    }
    return "Unknown";
}

std::optional<Gender> parse_gender_name(std::string_view s) {
    const auto l = lower(csv::trim(s));
    if (l == "female" || l == "f") return Gender::female;
    if (l == "male" || l == "m") return Gender::male;
    if (l == "other") return Gender::other;
    if (l == "unknown") return Gender::unknown;
    return std::nullopt;
}

std::optional<Region> parse_region_name(std::string_view s) {
    const auto l = lower(csv::trim(s));
    for (auto r : {Region::Africa, Region::NorthAmerica, Region::SouthAmerica, Region::Asia, Region::Europe,
                   Region::Oceania, Region::Unknown})
        if (lower(to_string(r)) == l) return r;
    return std::nullopt;
}

// ---------------------------------------------------------------------------

ResponseTable::ResponseTable(std::vector<std::string> items) : items_(std::move(items)) {}

std::vector<double> ResponseTable::row(std::size_t r) const {
    const auto m = items_.size();
    return {values_.begin() + static_cast<std::ptrdiff_t>(r * m), values_.begin() + static_cast<std::ptrdiff_t>((r + 1) * m)};
}

std::vector<double> ResponseTable::column(std::size_t item) const {
    std::vector<double> out(row_count());
    for (std::size_t r = 0; r < out.size(); ++r) out[r] = at(r, item);
    return out;
}

std::optional<std::size_t> ResponseTable::item_index(std::string_view id) const {
    for (std::size_t i = 0; i < items_.size(); ++i)
        if (items_[i] == id) return i;
    return std::nullopt;
}

void ResponseTable::add_row(const std::vector<double>& values, Demographics demo) {
    if (values.size() != items_.size())
        throw ValidationError("row has " + std::to_string(values.size()) + " values, table has " +
                              std::to_string(items_.size()) + " items");
    values_.insert(values_.end(), values.begin(), values.end());
    demographics_.push_back(std::move(demo));
}

bool ResponseTable::complete() const {
    return std::none_of(values_.begin(), values_.end(), [](double v) { return is_missing(v); });
}

bool operator==(const ResponseTable& a, const ResponseTable& b) {
    if (a.items_ != b.items_ || a.demographics_ != b.demographics_ || a.values_.size() != b.values_.size())
        return false;
    for (std::size_t i = 0; i < a.values_.size(); ++i) {
        const double x = a.values_[i], y = b.values_[i];
        if (is_missing(x) != is_missing(y)) return false;
        if (!is_missing(x) && x != y) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------

Codebook Codebook::ecr_default() {
    Codebook cb;
    cb.gender = {{"0", Gender::unknown}, {"1", Gender::male}, {"2", Gender::female}, {"3", Gender::other}};
    cb.country_alias = {{"UK", "GB"}};
    return cb;
}

Codebook Codebook::parse(std::istream& in) {
    Codebook cb;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto body = csv::trim(line);
        if (body.empty() || body.front() == '#') continue;
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) throw ParseError("expected key=value", line_no);
        const auto key = csv::trim(body.substr(0, eq));
        const auto value = csv::trim(body.substr(eq + 1));
        if (key.starts_with("gender.")) {
            auto g = parse_gender_name(value);
            if (!g) throw ParseError("unknown gender '" + std::string(value) + "'", line_no);
            cb.gender[std::string(key.substr(7))] = *g;
        } else if (key.starts_with("country.")) {
            cb.country_alias[upper(key.substr(8))] = upper(value);
        } else {
            throw ParseError("unknown key '" + std::string(key) + "'", line_no);
        }
    }
    return cb;
}

Codebook Codebook::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open codebook " + path.string());
    return parse(in);
}

Gender Codebook::gender_of(std::string_view raw) const {
    const auto key = std::string(csv::trim(raw));
    if (auto it = gender.find(key); it != gender.end()) return it->second;
    if (auto g = parse_gender_name(key)) return *g;
    return key.empty() ? Gender::unknown : Gender::other;
}

std::string Codebook::country_of(std::string_view raw) const {
    auto code = upper(csv::trim(raw));
    if (auto it = country_alias.find(code); it != country_alias.end()) return it->second;
    return code;
}

// ---------------------------------------------------------------------------

std::string canonical_item_id(std::string_view column_name) {
    auto name = csv::trim(column_name);
    if (name.size() < 2 || (name[0] != 'Q' && name[0] != 'q')) return {};
    const auto digits = name.substr(1);
    if (!std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        return {};
    const int n = std::stoi(std::string(digits));
    if (n <= 0) return {};
    char buf[16];
    std::snprintf(buf, sizeof buf, "Q%02d", n);
    return buf;
}

ParsedResponses parse_responses(std::istream& in, const ParseSchema& schema) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!csv::trim(line).empty()) break;
    }
    if (csv::trim(line).empty()) throw ParseError("empty input: header row required", line_no == 0 ? 1 : line_no);
    const std::size_t header_line = line_no;
    const char delim = csv::detect_delimiter(line);
    const auto header = csv::split(line, delim);

    // (item id, column index) sorted by item number
    std::vector<std::pair<std::string, std::size_t>> item_cols;
    std::optional<std::size_t> age_col, gender_col, country_col;
    for (std::size_t c = 0; c < header.size(); ++c) {
        const auto name = csv::trim(header[c]);
        if (auto id = canonical_item_id(name); !id.empty()) {
            for (const auto& [existing, _] : item_cols)
                if (existing == id) throw ParseError("duplicate item column " + id, header_line);
            item_cols.emplace_back(id, c);
        } else if (lower(name) == lower(schema.age_column)) {
            age_col = c;
        } else if (lower(name) == lower(schema.gender_column)) {
            gender_col = c;
        } else if (lower(name) == lower(schema.country_column)) {
            country_col = c;
        }
    }
    if (item_cols.empty()) throw ParseError("header has no item columns (expected Q1..Qm)", header_line);
    std::sort(item_cols.begin(), item_cols.end(),
              [](const auto& a, const auto& b) { return item_number(a.first) < item_number(b.first); });

    std::vector<std::string> items;
    for (const auto& [id, _] : item_cols) items.push_back(id);
    ParsedResponses result{ResponseTable(items), {}};

    std::vector<double> values(items.size());
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (csv::trim(line).empty()) continue;
        const auto fields = csv::split(line, delim);
        if (fields.size() != header.size()) {
            result.dropped_rows.push_back({line_no, "expected " + std::to_string(header.size()) + " fields, found " +
                                                        std::to_string(fields.size())});
            continue;
        }
        for (std::size_t i = 0; i < item_cols.size(); ++i)
            values[i] = csv::parse_double(fields[item_cols[i].second]).value_or(kMissing);

        Demographics demo;
        if (age_col) {
            if (auto a = csv::parse_int(fields[*age_col])) {
                demo.age = static_cast<int>(*a);
            } else if (auto d = csv::parse_double(fields[*age_col]); d && *d == static_cast<int>(*d)) {
                demo.age = static_cast<int>(*d);
            }
        }
        if (gender_col) demo.gender = schema.codebook.gender_of(fields[*gender_col]);
        if (country_col) {
            demo.country = schema.codebook.country_of(fields[*country_col]);
            demo.region = map_region(demo.country);
        }
        result.table.add_row(values, std::move(demo));
    }
    return result;
}

ParsedResponses parse_responses_file(const std::filesystem::path& path, const ParseSchema& schema) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return parse_responses(in, schema);
}

void write_responses(std::ostream& out, const ResponseTable& table) {
    for (const auto& id : table.items()) out << id << ',';
    out << "age,gender,country\n";
    for (std::size_t r = 0; r < table.row_count(); ++r) {
        for (std::size_t i = 0; i < table.item_count(); ++i) {
            const double v = table.at(r, i);
            if (!is_missing(v)) out << csv::format_double(v);
            out << ',';
        }
        const auto& d = table.demographics(r);
        if (d.age) out << *d.age;
        out << ',' << to_string(d.gender) << ',' << d.country << '\n';
    }
}

// ---------------------------------------------------------------------------

CohortFilter CohortFilter::standard() {
    CohortFilter f;
    f.age_range = AgeRange{18, 60};
    f.genders = std::set<Gender>{Gender::female, Gender::male};
    f.regions = std::set<Region>{Region::Africa, Region::NorthAmerica, Region::SouthAmerica,
                                 Region::Asia,   Region::Europe,       Region::Oceania};
    f.require_complete = true;
    return f;
}

ResponseTable filter_cohort(const ResponseTable& table, const CohortFilter& f) {
    if (f.age_range && f.age_range->lo > f.age_range->hi)
        throw ValidationError("age range lower bound " + std::to_string(f.age_range->lo) + " exceeds upper bound " +
                              std::to_string(f.age_range->hi));
    if (f.min_response > f.max_response) throw ValidationError("response range is empty");

    ResponseTable out(table.items());
    for (std::size_t r = 0; r < table.row_count(); ++r) {
        const auto& d = table.demographics(r);
        if (f.age_range && (!d.age || *d.age < f.age_range->lo || *d.age > f.age_range->hi)) continue;
        if (f.genders && !f.genders->contains(d.gender)) continue;
        if (f.regions && !f.regions->contains(d.region)) continue;
        auto values = table.row(r);
        if (f.require_complete &&
            std::any_of(values.begin(), values.end(),
                        [&](double v) { return is_missing(v) || v < f.min_response || v > f.max_response; }))
            continue;
        out.add_row(values, d);
    }
    if (out.row_count() == 0) throw EmptyCohortError("cohort filter removed every row");
    return out;
}

// ---------------------------------------------------------------------------

std::size_t DemographicReport::count(const std::string& dimension, const std::string& group) const {
    auto it = counts.find({dimension, group});
    return it == counts.end() ? 0 : it->second;
}

std::size_t DemographicReport::dimension_total(const std::string& dimension) const {
    std::size_t total = 0;
    for (const auto& [key, n] : counts)
        if (key.first == dimension) total += n;
    return total;
}

namespace {

std::string age_band(const std::optional<int>& age) {
    if (age)
        for (const auto& band : kAgeBands)
            if (*age >= band.lo && *age <= band.hi) return std::to_string(band.lo) + "-" + std::to_string(band.hi);
    return "other";
}

}  // namespace

DemographicReport demographic_summary(const ResponseTable& table) {
    DemographicReport rep;
    rep.rows = table.row_count();
    for (auto r : {Region::Africa, Region::NorthAmerica, Region::SouthAmerica, Region::Asia, Region::Europe,
                   Region::Oceania, Region::Unknown})
        rep.counts[{"region", std::string(to_string(r))}] = 0;
    for (auto g : {Gender::female, Gender::male, Gender::other, Gender::unknown})
        rep.counts[{"gender", std::string(to_string(g))}] = 0;
    for (const auto& band : kAgeBands) rep.counts[{"age", age_band(band.lo)}] = 0;
    rep.counts[{"age", "other"}] = 0;

    for (std::size_t r = 0; r < table.row_count(); ++r) {
        const auto& d = table.demographics(r);
        ++rep.counts[{"region", std::string(to_string(d.region))}];
        ++rep.counts[{"gender", std::string(to_string(d.gender))}];
        ++rep.counts[{"age", age_band(d.age)}];
    }
    return rep;
}

void print_demographics(std::ostream& out, const DemographicReport& rep) {
    auto line = [&](std::string_view type, std::string_view group, std::size_t n) {
        out << type << '\t' << group << '\t' << n << '\n';
    };
    out << "Type\tGroup\tQuantity\n";
    line("Region", "America (North and South)",
         rep.count("region", "NorthAmerica") + rep.count("region", "SouthAmerica"));
    for (const char* r : {"Europe", "Asia", "Oceania", "Africa", "Unknown"})
        if (std::string_view(r) != "Unknown" || rep.count("region", r) > 0) line("Region", r, rep.count("region", r));
    line("Gender", "Female", rep.count("gender", "female"));
    line("Gender", "Male", rep.count("gender", "male"));
    for (const char* g : {"other", "unknown"})
        if (rep.count("gender", g) > 0) line("Gender", g, rep.count("gender", g));
    for (const auto& band : kAgeBands) {
        const auto key = age_band(band.lo);
        line("Age", key, rep.count("age", key));
    }
    if (rep.count("age", "other") > 0) line("Age", "other", rep.count("age", "other"));
    out << "Total\t\t" << rep.rows << '\n';
}

}  // namespace attachnet
