#include <doctest.h>

#include <cmath>
#include <sstream>

#include "attachnet/csv.hpp"
#include "attachnet/error.hpp"
#include "attachnet/ingest.hpp"

using namespace attachnet;

namespace {

const char* kSample =
    "Q2,Q1,Q10,age,gender,country\n"
    "5,4,3,25,1,US\n"
    "1,2,,19,2,UK\n"
    "3,3,3,61,2,FR\n"
    "2,2\n"
    "4,5,1,40,3,NG\n";

}  // namespace

TEST_CASE("item ids are zero-padded and non-items rejected") {
    CHECK(canonical_item_id("Q7") == "Q07");
    CHECK(canonical_item_id("q07") == "Q07");
    CHECK(canonical_item_id(" Q36 ") == "Q36");
    CHECK(canonical_item_id("age").empty());
    CHECK(canonical_item_id("Q").empty());
    CHECK(canonical_item_id("Q1a").empty());
    CHECK(canonical_item_id("Q0").empty());
}

TEST_CASE("country codes map to continents") {
    CHECK(map_region("US") == Region::NorthAmerica);
    CHECK(map_region("us") == Region::NorthAmerica);
    CHECK(map_region("MX") == Region::NorthAmerica);
    CHECK(map_region("BR") == Region::SouthAmerica);
    CHECK(map_region("GB") == Region::Europe);
    CHECK(map_region("RU") == Region::Europe);
    CHECK(map_region("JP") == Region::Asia);
    CHECK(map_region("NG") == Region::Africa);
    CHECK(map_region("AU") == Region::Oceania);
    CHECK(map_region("ZZ") == Region::Unknown);
    CHECK(map_region("") == Region::Unknown);
}

TEST_CASE("parse_responses orders items, records ragged rows, keeps missing cells") {
    std::istringstream in(kSample);
    const auto parsed = parse_responses(in);
    const auto& t = parsed.table;
    REQUIRE(t.items() == std::vector<std::string>{"Q01", "Q02", "Q10"});
    REQUIRE(t.row_count() == 4);
    CHECK(t.at(0, 0) == 4);
    CHECK(t.at(0, 1) == 5);
    CHECK(is_missing(t.at(1, 2)));
    CHECK_FALSE(t.complete());
    REQUIRE(parsed.dropped_rows.size() == 1);
    CHECK(parsed.dropped_rows[0].line == 5);

    CHECK(t.demographics(0).gender == Gender::male);
    CHECK(t.demographics(1).gender == Gender::female);
    CHECK(t.demographics(3).gender == Gender::other);
    CHECK(t.demographics(1).country == "GB");
    CHECK(t.demographics(1).region == Region::Europe);
    CHECK(*t.demographics(2).age == 61);
}

TEST_CASE("tab-separated input is detected") {
    std::istringstream in("Q1\tQ2\tage\n1\t2\t30\n");
    const auto parsed = parse_responses(in);
    CHECK(parsed.table.row_count() == 1);
    CHECK(parsed.table.at(0, 1) == 2);
}

TEST_CASE("header without item columns is a parse error with its line") {
    std::istringstream in("\nage,gender\n20,1\n");
    try {
        parse_responses(in);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("codebook file overrides codes") {
    std::istringstream cfg("# custom\ngender.M = male\ngender.F=female\ncountry.EN = GB\n");
    const auto cb = Codebook::parse(cfg);
    CHECK(cb.gender_of("M") == Gender::male);
    CHECK(cb.gender_of("F") == Gender::female);
    CHECK(cb.country_of("en") == "GB");
    std::istringstream bad("colour.1=red\n");
    CHECK_THROWS_AS(Codebook::parse(bad), ParseError);
}

TEST_CASE("cohort filter applies age, gender, region and completeness") {
    std::istringstream in(kSample);
    const auto table = parse_responses(in).table;
    const auto cohort = filter_cohort(table, CohortFilter::standard());
    // Row 2 has a missing answer, row 3 is 61, row 4 is "other" gender.
    REQUIRE(cohort.row_count() == 1);
    CHECK(cohort.demographics(0).country == "US");

    CohortFilter ages;
    ages.age_range = AgeRange{19, 25};
    CHECK(filter_cohort(table, ages).row_count() == 2);

    CohortFilter inverted;
    inverted.age_range = AgeRange{30, 20};
    CHECK_THROWS_AS(filter_cohort(table, inverted), ValidationError);

    CohortFilter nobody;
    nobody.age_range = AgeRange{90, 99};
    CHECK_THROWS_AS(filter_cohort(table, nobody), EmptyCohortError);
}

TEST_CASE("out-of-scale answers fail the completeness check") {
    std::istringstream in("Q1,Q2,age,gender,country\n1,6,30,1,US\n1,5,30,1,US\n");
    const auto t = parse_responses(in).table;
    CohortFilter f;
    f.require_complete = true;
    CHECK(filter_cohort(t, f).row_count() == 1);
}

TEST_CASE("canonical CSV round-trips") {
    std::istringstream in(kSample);
    const auto table = parse_responses(in).table;
    std::ostringstream out;
    write_responses(out, table);
    std::istringstream back(out.str());
    const auto again = parse_responses(back).table;
    CHECK(again == table);
}

TEST_CASE("demographic summary counts each row once per dimension") {
    std::istringstream in(kSample);
    const auto table = parse_responses(in).table;
    const auto rep = demographic_summary(table);
    for (const char* dim : {"region", "gender", "age"}) CHECK(rep.dimension_total(dim) == table.row_count());
    CHECK(rep.count("age", "18-20") == 1);
    CHECK(rep.count("age", "21-30") == 1);
    CHECK(rep.count("age", "other") == 1);
    CHECK(rep.count("region", "Africa") == 1);
    std::ostringstream printed;
    print_demographics(printed, rep);
    CHECK(printed.str().find("America (North and South)\t1") != std::string::npos);
}

TEST_CASE("csv helpers") {
    CHECK(csv::detect_delimiter("a\tb") == '\t');
    CHECK(csv::detect_delimiter("a,b") == ',');
    CHECK(csv::split("a,\"b,c\",\"d\"\"e\"", ',') == std::vector<std::string>{"a", "b,c", "d\"e"});
    CHECK(csv::parse_double(" 1.5 ") == 1.5);
    CHECK_FALSE(csv::parse_double("x").has_value());
    CHECK(csv::format_double(0.1) == "0.1");
    std::istringstream ragged("a,b\n1,2\n3\n");
    CHECK_THROWS_AS(csv::read(ragged), ParseError);
}

TEST_CASE("bundled codebook matches the built-in default") {
    const auto cb = Codebook::load(std::string(ATTACHNET_FIXTURE_DIR) + "/../codebook.conf");
    const auto def = Codebook::ecr_default();
    CHECK(cb.gender == def.gender);
    CHECK(cb.country_alias == def.country_alias);
}
