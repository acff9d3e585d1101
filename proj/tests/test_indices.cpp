#include <doctest.h>

#include <cmath>

#include "iaq/breakpoints.hpp"
#include "iaq/errors.hpp"
#include "iaq/indices.hpp"

using namespace iaq;

namespace {
const BreakpointTable& table(ChannelKind ch) {
    return default_breakpoint_tables().at(ch);
}
} // namespace

TEST_CASE("linear sub-index reproduces hand-computed values") {
    // 230.4295 ppm CO2 sits in the 0..379 band mapping onto 0..50.
    const auto co2 = interpolate_index(table(ChannelKind::CO2), 230.4295);
    CHECK(co2.value == doctest::Approx(30.39966).epsilon(1e-5));
    CHECK(co2.category == HealthCategory::Good);

    // 3.0 ppm H2S sits in the 1.6..5 band mapping onto 101..150.
    const auto h2s = interpolate_index(table(ChannelKind::H2S), 3.0);
    CHECK(h2s.value == doctest::Approx(121.17647).epsilon(1e-5));
    CHECK(h2s.category == HealthCategory::UnhealthySensitive);

    // Band edges map onto index edges exactly.
    CHECK(interpolate_index(table(ChannelKind::CO), 0.21).value == 51);
    CHECK(interpolate_index(table(ChannelKind::CO), 2.0).value == 100);
}

TEST_CASE("sub-index bridges the small gaps between bands and clamps the top") {
    const auto& co = table(ChannelKind::CO);
    // Midway across the 2.0..2.1 gap the index is midway between 100 and 101.
    CHECK(interpolate_index(co, 2.05).value == doctest::Approx(100.5));
    // Fine sweep: the mapping is monotone nondecreasing and continuous.
    double prev = interpolate_index(co, 0.0).value;
    double arg_prev = 0.0;
    for (double c = 0.01; c <= 55.0; c += 0.01) {
        const double v = interpolate_index(co, c).value;
        CHECK(v >= prev);
        CHECK(std::abs(v - prev) <= (c - arg_prev) * 500 + 1e-9);
        prev = v;
        arg_prev = c;
    }
    // Beyond the top band the index clamps to 400.
    CHECK(interpolate_index(co, 50.4).value == 400);
    CHECK(interpolate_index(co, 99.0).value == 400);
    CHECK(interpolate_index(co, 99.0).category == HealthCategory::Hazardous);
    CHECK_THROWS_AS(interpolate_index(co, -1.0), DataError);
    CHECK_THROWS_AS(interpolate_index(table(ChannelKind::O2), 20.0), UsageError);
}

TEST_CASE("oxygen sub-index follows the verbatim descending-band formula") {
    const auto& o2 = table(ChannelKind::O2);
    // In the 19..20.9 band the formula sends conc_hi to idx_hi.
    CHECK(interpolate_oxygen_index(o2, 19.7347).value ==
          doctest::Approx(69.94752).epsilon(1e-5));
    CHECK(interpolate_oxygen_index(o2, 20.9).value == doctest::Approx(100));
    CHECK(interpolate_oxygen_index(o2, 19.0).value == doctest::Approx(51));
    // Good band is (20.9, 20.95]; above it the index clamps to 0.
    CHECK(interpolate_oxygen_index(o2, 20.95).value == doctest::Approx(50));
    CHECK(interpolate_oxygen_index(o2, 20.92).value > 0);
    CHECK(interpolate_oxygen_index(o2, 21.5).value == 0);
    CHECK_THROWS_AS(interpolate_oxygen_index(o2, 0.0), DataError);
    CHECK_THROWS_AS(interpolate_oxygen_index(o2, 101.0), DataError);
    CHECK_THROWS_AS(interpolate_oxygen_index(table(ChannelKind::CO), 20.0),
                    UsageError);

    SUBCASE("corrected variant rises as oxygen falls inside a band") {
        const double lo = interpolate_oxygen_index(o2, 19.2, true).value;
        const double hi = interpolate_oxygen_index(o2, 20.5, true).value;
        CHECK(lo > hi);
        CHECK(interpolate_oxygen_index(o2, 19.0, true).value == doctest::Approx(100));
        CHECK(interpolate_oxygen_index(o2, 20.9, true).value == doctest::Approx(51));
    }
}

TEST_CASE("overall index aggregates by max or mean") {
    std::vector<IndexValue> subs = {
        {80, ChannelKind::CO, HealthCategory::Moderate},
        {120, ChannelKind::H2S, HealthCategory::UnhealthySensitive},
        {40, ChannelKind::CO2, HealthCategory::Good},
    };
    const auto mx = overall_iaqi(subs, Aggregation::Max);
    CHECK(mx.value == 120);
    CHECK(mx.category == HealthCategory::UnhealthySensitive);
    CHECK_FALSE(mx.channel.has_value());
    const auto mean = overall_iaqi(subs, Aggregation::Mean);
    CHECK(mean.value == doctest::Approx(80));
    CHECK(mean.category == HealthCategory::Moderate);
    CHECK_THROWS_AS(overall_iaqi({}, Aggregation::Max), DataError);
}

TEST_CASE("humidex reproduces hand-computed values") {
    CHECK(humidex(30, 100).value == doctest::Approx(47.96).epsilon(1e-3));
    CHECK(humidex(30, 100).rating == HumidexRating::GreatDiscomfort);
    CHECK(humidex(20, 0).value == doctest::Approx(14.4444).epsilon(1e-4));
    CHECK(humidex(20, 0).rating == HumidexRating::Comfort);
    CHECK(humidex(25, 50).value == doctest::Approx(28.23).epsilon(1e-3));
    CHECK_THROWS_AS(humidex(25, 101), DataError);
    CHECK_THROWS_AS(humidex(25, -1), DataError);
    CHECK_THROWS_AS(humidex(200, 50), DataError);
}

TEST_CASE("humidex is monotone in temperature and humidity") {
    double prev = -100;
    for (double t = 0; t <= 45; t += 0.5) {
        const double h = humidex(t, 60).value;
        CHECK(h > prev);
        prev = h;
    }
    prev = -100;
    for (double rh = 0; rh <= 100; rh += 2) {
        const double h = humidex(30, rh).value;
        CHECK(h > prev);
        prev = h;
    }
}

TEST_CASE("combined index is the weighted sum of humidex and overall index") {
    const IndexValue iaqi{120, std::nullopt, HealthCategory::UnhealthySensitive};
    const Humidex h{40, HumidexRating::SomeDiscomfort};
    CHECK(eiaqi(iaqi, h) == doctest::Approx(160));
    CHECK(eiaqi(iaqi, h, {0.5, 2.0}) == doctest::Approx(260));
}

TEST_CASE("weightage sums category and rating scores into a label") {
    // Good(+3) with No Comfort(+2) sums to 5.
    const auto w = weightage_label(HealthCategory::Good, HumidexRating::NoComfort);
    CHECK(w.total == 5);
    CHECK(w.label == "Better");

    const auto best = weightage_label(HealthCategory::Good, HumidexRating::Comfort);
    CHECK(best.total == 6);
    CHECK(best.label == "Best");

    const auto mid =
        weightage_label(HealthCategory::UnhealthySensitive, HumidexRating::NoComfort);
    CHECK(mid.total == 3);
    CHECK(mid.label == "Good");

    const auto bad =
        weightage_label(HealthCategory::Hazardous, HumidexRating::SomeDiscomfort);
    CHECK(bad.total == -1);
    CHECK(bad.label == "Poor");

    const auto worst =
        weightage_label(HealthCategory::Hazardous, HumidexRating::HeatStroke);
    CHECK(worst.total == -4);
    CHECK(worst.label == "Hazardous");
}
