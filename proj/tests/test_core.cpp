#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "iaq/breakpoints.hpp"
#include "iaq/channels.hpp"
#include "iaq/errors.hpp"

using namespace iaq;

TEST_CASE("channel names round-trip and unknown names are rejected") {
    for (ChannelKind ch : all_channels()) {
        const auto back = parse_channel(to_string(ch));
        REQUIRE(back.has_value());
        CHECK(*back == ch);
    }
    CHECK(parse_channel("co2") == ChannelKind::CO2);
    CHECK(parse_channel("radon") == std::nullopt);
    CHECK(parse_channel("") == std::nullopt);
}

TEST_CASE("canonical units") {
    CHECK(canonical_unit(ChannelKind::CO) == "ppm");
    CHECK(canonical_unit(ChannelKind::CO2) == "ppm");
    CHECK(canonical_unit(ChannelKind::O2) == "%");
    CHECK(canonical_unit(ChannelKind::Temperature) == "degC");
    CHECK(canonical_unit(ChannelKind::Humidity) == "%");
    CHECK(is_gas(ChannelKind::H2S));
    CHECK_FALSE(is_gas(ChannelKind::Temperature));
    CHECK_FALSE(is_gas(ChannelKind::Humidity));
}

TEST_CASE("categorize rounds half up and clamps the top") {
    CHECK(categorize(0) == HealthCategory::Good);
    CHECK(categorize(50.4) == HealthCategory::Good);
    CHECK(categorize(50.5) == HealthCategory::Moderate);
    CHECK(categorize(100.0) == HealthCategory::Moderate);
    CHECK(categorize(100.5) == HealthCategory::UnhealthySensitive);
    CHECK(categorize(150.49) == HealthCategory::UnhealthySensitive);
    CHECK(categorize(200.5) == HealthCategory::VeryUnhealthy);
    CHECK(categorize(300.5) == HealthCategory::Hazardous);
    CHECK(categorize(400.0) == HealthCategory::Hazardous);
    CHECK(categorize(4000.0) == HealthCategory::Hazardous);
    CHECK_THROWS_AS(categorize(-0.6), DataError);
}

TEST_CASE("category intervals partition 0..400") {
    int next = 0;
    for (int i = 0; i < kCategoryCount; ++i) {
        const auto iv = category_interval(static_cast<HealthCategory>(i));
        CHECK(iv.lo == next);
        CHECK(iv.hi >= iv.lo);
        next = iv.hi + 1;
    }
    CHECK(next == 401);
}

TEST_CASE("humidex rating thresholds are half-open") {
    CHECK(rate_humidex(12.0) == HumidexRating::Comfort);
    CHECK(rate_humidex(29.999) == HumidexRating::Comfort);
    CHECK(rate_humidex(30.0) == HumidexRating::NoComfort);
    CHECK(rate_humidex(40.0) == HumidexRating::SomeDiscomfort);
    CHECK(rate_humidex(46.0) == HumidexRating::GreatDiscomfort);
    CHECK(rate_humidex(55.0) == HumidexRating::Dangerous);
    CHECK(rate_humidex(61.0) == HumidexRating::HeatStroke);
    CHECK(rate_humidex(80.0) == HumidexRating::HeatStroke);
}

TEST_CASE("default breakpoint tables cover all gas channels and validate") {
    const auto& tables = default_breakpoint_tables();
    for (ChannelKind ch : all_channels()) {
        if (!is_gas(ch)) {
            CHECK(tables.count(ch) == 0);
            continue;
        }
        REQUIRE(tables.count(ch) == 1);
        const auto& t = tables.at(ch);
        CHECK(t.bands.size() == 6);
        CHECK_NOTHROW(validate_table(t));
        CHECK(t.bands.front().idx_lo == 0);
        CHECK(t.bands.back().idx_hi == 400);
    }
    CHECK(tables.at(ChannelKind::O2).orientation ==
          Orientation::DescendingConcentration);
    CHECK(tables.at(ChannelKind::CO).orientation == Orientation::Ascending);
}

TEST_CASE("validate_table rejects malformed tables") {
    BreakpointTable t;
    t.channel = ChannelKind::CO;
    t.orientation = Orientation::Ascending;

    SUBCASE("empty") { CHECK_THROWS_AS(validate_table(t), DataError); }

    SUBCASE("index bands must span 0..400") {
        t.bands = {{0, 1, 0, 50, HealthCategory::Good, false}};
        CHECK_THROWS_AS(validate_table(t), DataError);
    }

    SUBCASE("overlapping concentration bands") {
        t.bands = {{0, 2, 0, 50, HealthCategory::Good, false},
                   {1, 3, 51, 400, HealthCategory::Moderate, false}};
        CHECK_THROWS_AS(validate_table(t), DataError);
    }

    SUBCASE("inverted band") {
        t.bands = {{2, 1, 0, 400, HealthCategory::Good, false}};
        CHECK_THROWS_AS(validate_table(t), DataError);
    }
}

TEST_CASE("breakpoint file loads and matches the built-ins") {
    const auto loaded =
        load_breakpoint_tables(std::string(IAQ_DATA_DIR) + "/breakpoints_default.json");
    const auto& builtin = default_breakpoint_tables();
    REQUIRE(loaded.size() == builtin.size());
    for (const auto& [ch, t] : builtin) {
        const auto& l = loaded.at(ch);
        REQUIRE(l.bands.size() == t.bands.size());
        for (std::size_t i = 0; i < t.bands.size(); ++i) {
            CHECK(l.bands[i].conc_lo == doctest::Approx(t.bands[i].conc_lo));
            CHECK(l.bands[i].conc_hi == doctest::Approx(t.bands[i].conc_hi));
            CHECK(l.bands[i].idx_lo == t.bands[i].idx_lo);
            CHECK(l.bands[i].idx_hi == t.bands[i].idx_hi);
            CHECK(l.bands[i].category == t.bands[i].category);
            CHECK(l.bands[i].lo_exclusive == t.bands[i].lo_exclusive);
        }
    }
}

TEST_CASE("breakpoint file overrides merge into the defaults") {
    const std::string path = "/tmp/iaq_test_bp.json";
    {
        std::ofstream out(path);
        out << R"([
          {"channel":"CO","conc_lo":0,"conc_hi":10,"idx_lo":0,"idx_hi":200,"category":"Good"},
          {"channel":"CO","conc_lo":10.1,"conc_hi":20,"idx_lo":201,"idx_hi":400,"category":"Hazardous"}
        ])";
    }
    const auto tables = load_breakpoint_tables(path);
    CHECK(tables.at(ChannelKind::CO).bands.size() == 2);
    CHECK(tables.at(ChannelKind::CO).bands[0].conc_hi == 10);
    CHECK(tables.at(ChannelKind::CO2).bands.size() == 6);
    std::remove(path.c_str());
}

TEST_CASE("missing or malformed breakpoint files raise data errors") {
    CHECK_THROWS_AS(load_breakpoint_tables("/nonexistent/bp.json"), DataError);
    const std::string path = "/tmp/iaq_test_bp_bad.json";
    {
        std::ofstream out(path);
        out << "{\"not\": \"an array\"}";
    }
    CHECK_THROWS_AS(load_breakpoint_tables(path), DataError);
    std::remove(path.c_str());
}
