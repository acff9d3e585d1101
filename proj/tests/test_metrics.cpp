#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "iaq/errors.hpp"
#include "iaq/metrics.hpp"
#include "iaq/timeseries.hpp"

using namespace iaq;

TEST_CASE("hand-computed example") {
    // reference {2,4}, forecast {1,2}: MAPE 50, RMSE sqrt(5/2), R2 1 - 5/5 = 0.
    const auto r = evaluate({2, 4}, {1, 2});
    REQUIRE(r.mape.has_value());
    CHECK(*r.mape == doctest::Approx(50.0));
    CHECK(r.rmse == doctest::Approx(std::sqrt(2.5)));
    CHECK(r.r2 == doctest::Approx(0.0));
}

TEST_CASE("perfect forecast") {
    const auto r = evaluate({1.5, 2.5, 3.5}, {1.5, 2.5, 3.5});
    CHECK(*r.mape == 0.0);
    CHECK(r.rmse == 0.0);
    CHECK(r.r2 == doctest::Approx(1.0));
}

TEST_CASE("single sample") {
    // reference 3, forecast 1: MAPE 200/3, RMSE 2, R2 1 - 4/1 = -3.
    const auto r = evaluate({3}, {1});
    CHECK(*r.mape == doctest::Approx(200.0 / 3.0));
    CHECK(r.rmse == doctest::Approx(2.0));
    CHECK(r.r2 == doctest::Approx(-3.0));
}

TEST_CASE("RMSE cross-check: N * RMSE^2 equals the squared error sum") {
    std::mt19937_64 rng(5);
    auto u = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    std::vector<double> y_r(50), y_m(50);
    for (int i = 0; i < 50; ++i) {
        y_r[i] = 1.0 + u();
        y_m[i] = y_r[i] + 0.1 * (u() - 0.5);
    }
    const auto rep = evaluate(y_r, y_m);
    double sq = 0;
    for (int i = 0; i < 50; ++i) sq += (y_r[i] - y_m[i]) * (y_r[i] - y_m[i]);
    CHECK(rep.rmse * rep.rmse * 50 == doctest::Approx(sq).epsilon(1e-12));
}

TEST_CASE("MAPE is symmetric under joint negation") {
    const auto a = evaluate({2, 4}, {1, 5});
    const auto b = evaluate({-2, -4}, {-1, -5});
    CHECK(*a.mape == doctest::Approx(*b.mape));
    CHECK(a.rmse == doctest::Approx(b.rmse));
}

TEST_CASE("zero reference value poisons MAPE with a located error") {
    bool threw = false;
    try {
        static_cast<void>(evaluate({1, 0, 2}, {1, 1, 2}));
    } catch (const DataError& e) {
        threw = true;
        CHECK(std::string(e.what()).find("sample 1") != std::string::npos);
    }
    CHECK(threw);
    // Skipping MAPE makes the same input legal.
    const auto r = evaluate({1, 0, 2}, {1, 1, 2}, R2Mode::AsPrinted, false);
    CHECK_FALSE(r.mape.has_value());
    CHECK(r.rmse == doctest::Approx(std::sqrt(1.0 / 3.0)));
}

TEST_CASE("R2 conventions") {
    const std::vector<double> y_r = {2, 4, 6};
    const std::vector<double> y_m = {2.5, 3.5, 6.5};

    // As printed: denominator is the forecast's own energy.
    double num = 0, den_p = 0;
    for (int i = 0; i < 3; ++i) {
        num += (y_m[i] - y_r[i]) * (y_m[i] - y_r[i]);
        den_p += y_m[i] * y_m[i];
    }
    const auto printed = evaluate(y_r, y_m, R2Mode::AsPrinted);
    CHECK(printed.r2 == doctest::Approx(1.0 - num / den_p));

    // Centered: denominator is the reference variance around its mean.
    const double mean = 4.0;
    double den_c = 0;
    for (int i = 0; i < 3; ++i) den_c += (y_r[i] - mean) * (y_r[i] - mean);
    const auto centered = evaluate(y_r, y_m, R2Mode::Centered);
    CHECK(centered.r2 == doctest::Approx(1.0 - num / den_c));

    // A constant reference has zero variance: centered R2 is undefined.
    CHECK_THROWS_AS(evaluate({3, 3, 3}, {1, 2, 3}, R2Mode::Centered), DataError);
    // An all-zero forecast has zero energy: printed R2 is undefined.
    CHECK_THROWS_AS(
        evaluate(std::vector<double>{1, 2, 3}, std::vector<double>{0, 0, 0},
                 R2Mode::AsPrinted, false),
        DataError);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(evaluate({1, 2}, {1}), DataError);
    CHECK_THROWS_AS(evaluate(std::vector<double>{}, std::vector<double>{}),
                    DataError);
}

TEST_CASE("series overload refuses gaps and mismatched grids") {
    TimeSeries a, b;
    a.channel = b.channel = ChannelKind::CO;
    a.start = b.start = 0;
    a.unit = b.unit = "ppm";
    a.values = {1.0, 2.0, 3.0};
    b.values = {1.0, 2.0, 3.5};
    const auto rep = evaluate(a, b);
    CHECK(rep.rmse == doctest::Approx(0.5 / std::sqrt(3.0)));

    b.values[1] = std::nullopt;
    CHECK_THROWS_AS(evaluate(a, b), DataError);
}
