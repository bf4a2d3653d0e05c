#include <algorithm>
#include <array>
#include <cctype>
#include <string>
#include <string_view>

#include "attachnet/ingest.hpp"

namespace attachnet {
namespace {

struct CountryRegion {
    std::string_view code;
    Region region;
};

using enum Region;

// ISO 3166-1 alpha-2 -> continent. Central America and the Caribbean are North
// America; Turkey, Cyprus and the Caucasus follow the UN geoscheme (Asia);
// Russia is Europe.
constexpr auto kCountryRegions = std::to_array<CountryRegion>({
    {"AD", Europe},       {"AE", Asia},         {"AF", Asia},         {"AG", NorthAmerica}, {"AI", NorthAmerica},
    {"AL", Europe},       {"AM", Asia},         {"AO", Africa},       {"AR", SouthAmerica}, {"AS", Oceania},
    {"AT", Europe},       {"AU", Oceania},      {"AW", NorthAmerica}, {"AX", Europe},       {"AZ", Asia},
    {"BA", Europe},       {"BB", NorthAmerica}, {"BD", Asia},         {"BE", Europe},       {"BF", Africa},
    {"BG", Europe},       {"BH", Asia},         {"BI", Africa},       {"BJ", Africa},       {"BL", NorthAmerica},
    {"BM", NorthAmerica}, {"BN", Asia},         {"BO", SouthAmerica}, {"BQ", NorthAmerica}, {"BR", SouthAmerica},
    {"BS", NorthAmerica}, {"BT", Asia},         {"BW", Africa},       {"BY", Europe},       {"BZ", NorthAmerica},
    {"CA", NorthAmerica}, {"CC", Oceania},      {"CD", Africa},       {"CF", Africa},       {"CG", Africa},
    {"CH", Europe},       {"CI", Africa},       {"CK", Oceania},      {"CL", SouthAmerica}, {"CM", Africa},
    {"CN", Asia},         {"CO", SouthAmerica}, {"CR", NorthAmerica}, {"CU", NorthAmerica}, {"CV", Africa},
    {"CW", NorthAmerica}, {"CX", Oceania},      {"CY", Asia},         {"CZ", Europe},       {"DE", Europe},
    {"DJ", Africa},       {"DK", Europe},       {"DM", NorthAmerica}, {"DO", NorthAmerica}, {"DZ", Africa},
    {"EC", SouthAmerica}, {"EE", Europe},       {"EG", Africa},       {"EH", Africa},       {"ER", Africa},
    {"ES", Europe},       {"ET", Africa},       {"FI", Europe},       {"FJ", Oceania},      {"FK", SouthAmerica},
    {"FM", Oceania},      {"FO", Europe},       {"FR", Europe},       {"GA", Africa},       {"GB", Europe},
    {"GD", NorthAmerica}, {"GE", Asia},         {"GF", SouthAmerica}, {"GG", Europe},       {"GH", Africa},
    {"GI", Europe},       {"GL", NorthAmerica}, {"GM", Africa},       {"GN", Africa},       {"GP", NorthAmerica},
    {"GQ", Africa},       {"GR", Europe},       {"GS", SouthAmerica}, {"GT", NorthAmerica}, {"GU", Oceania},
    {"GW", Africa},       {"GY", SouthAmerica}, {"HK", Asia},         {"HN", NorthAmerica}, {"HR", Europe},
    {"HT", NorthAmerica}, {"HU", Europe},       {"ID", Asia},         {"IE", Europe},       {"IL", Asia},
    {"IM", Europe},       {"IN", Asia},         {"IQ", Asia},         {"IR", Asia},         {"IS", Europe},
    {"IT", Europe},       {"JE", Europe},       {"JM", NorthAmerica}, {"JO", Asia},         {"JP", Asia},
    {"KE", Africa},       {"KG", Asia},         {"KH", Asia},         {"KI", Oceania},      {"KM", Africa},
    {"KN", NorthAmerica}, {"KP", Asia},         {"KR", Asia},         {"KW", Asia},         {"KY", NorthAmerica},
    {"KZ", Asia},         {"LA", Asia},         {"LB", Asia},         {"LC", NorthAmerica}, {"LI", Europe},
    {"LK", Asia},         {"LR", Africa},       {"LS", Africa},       {"LT", Europe},       {"LU", Europe},
    {"LV", Europe},       {"LY", Africa},       {"MA", Africa},       {"MC", Europe},       {"MD", Europe},
    {"ME", Europe},       {"MF", NorthAmerica}, {"MG", Africa},       {"MH", Oceania},      {"MK", Europe},
    {"ML", Africa},       {"MM", Asia},         {"MN", Asia},         {"MO", Asia},         {"MP", Oceania},
    {"MQ", NorthAmerica}, {"MR", Africa},       {"MS", NorthAmerica}, {"MT", Europe},       {"MU", Africa},
    {"MV", Asia},         {"MW", Africa},       {"MX", NorthAmerica}, {"MY", Asia},         {"MZ", Africa},
    {"NA", Africa},       {"NC", Oceania},      {"NE", Africa},       {"NF", Oceania},      {"NG", Africa},
    {"NI", NorthAmerica}, {"NL", Europe},       {"NO", Europe},       {"NP", Asia},         {"NR", Oceania},
    {"NU", Oceania},      {"NZ", Oceania},      {"OM", Asia},         {"PA", NorthAmerica}, {"PE", SouthAmerica},
    {"PF", Oceania},      {"PG", Oceania},      {"PH", Asia},         {"PK", Asia},         {"PL", Europe},
    {"PM", NorthAmerica}, {"PN", Oceania},      {"PR", NorthAmerica}, {"PS", Asia},         {"PT", Europe},
    {"PW", Oceania},      {"PY", SouthAmerica}, {"QA", Asia},         {"RE", Africa},       {"RO", Europe},
    {"RS", Europe},       {"RU", Europe},       {"RW", Africa},       {"SA", Asia},         {"SB", Oceania},
    {"SC", Africa},       {"SD", Africa},       {"SE", Europe},       {"SG", Asia},         {"SH", Africa},
    {"SI", Europe},       {"SJ", Europe},       {"SK", Europe},       {"SL", Africa},       {"SM", Europe},
    {"SN", Africa},       {"SO", Africa},       {"SR", SouthAmerica}, {"SS", Africa},       {"ST", Africa},
    {"SV", NorthAmerica}, {"SX", NorthAmerica}, {"SY", Asia},         {"SZ", Africa},       {"TC", NorthAmerica},
    {"TD", Africa},       {"TG", Africa},       {"TH", Asia},         {"TJ", Asia},         {"TK", Oceania},
    {"TL", Asia},         {"TM", Asia},         {"TN", Africa},       {"TO", Oceania},      {"TR", Asia},
    {"TT", NorthAmerica}, {"TV", Oceania},      {"TW", Asia},         {"TZ", Africa},       {"UA", Europe},
    {"UG", Africa},       {"UM", Oceania},      {"US", NorthAmerica}, {"UY", SouthAmerica}, {"UZ", Asia},
    {"VA", Europe},       {"VC", NorthAmerica}, {"VE", SouthAmerica}, {"VG", NorthAmerica}, {"VI", NorthAmerica},
    {"VN", Asia},         {"VU", Oceania},      {"WF", Oceania},      {"WS", Oceania},      {"XK", Europe},
    {"YE", Asia},         {"YT", Africa},       {"ZA", Africa},       {"ZM", Africa},       {"ZW", Africa},
});

static_assert(std::is_sorted(kCountryRegions.begin(), kCountryRegions.end(),
                             [](const CountryRegion& a, const CountryRegion& b) { return a.code < b.code; }));

}  // namespace

Region map_region(std::string_view country_code) {
    std::string code;
    for (char c : country_code)
        if (!std::isspace(static_cast<unsigned char>(c))) code.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (code.size() != 2) return Region::Unknown;
    const auto it = std::lower_bound(kCountryRegions.begin(), kCountryRegions.end(), code,
                                     [](const CountryRegion& e, const std::string& k) { return e.code < k; });
    if (it == kCountryRegions.end() || it->code != code) return Region::Unknown;
    return it->region;
}

}  // namespace attachnet
