#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "iaq/errors.hpp"

namespace iaq {

// The ten measured channels. The eight gases carry a breakpoint table;
// Temperature and Humidity feed the humidex instead.
enum class ChannelKind {
    CO,
    CO2,
    O2,
    H2,
    NH3,
    Ethanol,
    H2S,
    Toluene,
    Temperature,
    Humidity,
};

inline constexpr int kChannelCount = 10;

inline constexpr std::array<ChannelKind, kChannelCount> all_channels() {
    return {ChannelKind::CO,      ChannelKind::CO2,     ChannelKind::O2,
            ChannelKind::H2,      ChannelKind::NH3,     ChannelKind::Ethanol,
            ChannelKind::H2S,     ChannelKind::Toluene, ChannelKind::Temperature,
            ChannelKind::Humidity};
}

std::string_view to_string(ChannelKind c);
std::optional<ChannelKind> parse_channel(std::string_view name);

// Canonical wire unit: ppm for gases, % for O2 and Humidity, degC for Temperature.
std::string_view canonical_unit(ChannelKind c);

inline bool is_gas(ChannelKind c) {
    return c != ChannelKind::Temperature && c != ChannelKind::Humidity;
}

// Health bands over index points. Intervals: 0-50, 51-100, 101-150, 151-200,
// 201-300, 301-400. Indices above 400 clamp to Hazardous.
enum class HealthCategory {
    Good,
    Moderate,
    UnhealthySensitive,
    Unhealthy,
    VeryUnhealthy,
    Hazardous,
};

inline constexpr int kCategoryCount = 6;

std::string_view to_string(HealthCategory c);
std::optional<HealthCategory> parse_category(std::string_view name);
std::string_view color_code(HealthCategory c);

// Interval of integer index points covered by a category.
struct CategoryInterval {
    int lo;
    int hi;
};
CategoryInterval category_interval(HealthCategory c);

// Rounds half up, clamps above 400 into Hazardous. Negative input is a domain error.
HealthCategory categorize(double index);

// Heat-discomfort ratings over humidex points. Ranges are half-open
// [16,30) [30,40) [40,46) [46,55) [55,61) [61,inf); below 16 rates Comfort.
enum class HumidexRating {
    Comfort,
    NoComfort,
    SomeDiscomfort,
    GreatDiscomfort,
    Dangerous,
    HeatStroke,
};

std::string_view to_string(HumidexRating r);
HumidexRating rate_humidex(double value);

} // namespace iaq
