#include "iaq/channels.hpp"

#include <cctype>

#include <cmath>

namespace iaq {

std::string_view to_string(ChannelKind c) {
    switch (c) {
        case ChannelKind::CO: return "CO";
        case ChannelKind::CO2: return "CO2";
        case ChannelKind::O2: return "O2";
        case ChannelKind::H2: return "H2";
        case ChannelKind::NH3: return "NH3";
        case ChannelKind::Ethanol: return "Ethanol";
        case ChannelKind::H2S: return "H2S";
        case ChannelKind::Toluene: return "Toluene";
        case ChannelKind::Temperature: return "Temperature";
        case ChannelKind::Humidity: return "Humidity";
    }
    return "?";
}

std::optional<ChannelKind> parse_channel(std::string_view name) {
    const auto eq_fold = [](std::string_view a, std::string_view b) {
        if (a.size() != b.size()) return false;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (std::tolower(static_cast<unsigned char>(a[i])) !=
                std::tolower(static_cast<unsigned char>(b[i])))
                return false;
        return true;
    };
    for (ChannelKind c : all_channels())
        if (eq_fold(name, to_string(c))) return c;
    return std::nullopt;
}

std::string_view canonical_unit(ChannelKind c) {
    switch (c) {
        case ChannelKind::O2:
        case ChannelKind::Humidity: return "%";
        case ChannelKind::Temperature: return "degC";
        default: return "ppm";
    }
}

std::string_view to_string(HealthCategory c) {
    switch (c) {
        case HealthCategory::Good: return "Good";
        case HealthCategory::Moderate: return "Moderate";
        case HealthCategory::UnhealthySensitive: return "Unhealthy for Sensitive Groups";
        case HealthCategory::Unhealthy: return "Unhealthy";
        case HealthCategory::VeryUnhealthy: return "Very Unhealthy";
        case HealthCategory::Hazardous: return "Hazardous";
    }
    return "?";
}

std::optional<HealthCategory> parse_category(std::string_view name) {
    constexpr HealthCategory cats[] = {
        HealthCategory::Good,      HealthCategory::Moderate,
        HealthCategory::UnhealthySensitive, HealthCategory::Unhealthy,
        HealthCategory::VeryUnhealthy,      HealthCategory::Hazardous};
    for (HealthCategory c : cats)
        if (name == to_string(c)) return c;
    // Short aliases accepted in config files.
    if (name == "UnhealthySensitive") return HealthCategory::UnhealthySensitive;
    if (name == "VeryUnhealthy") return HealthCategory::VeryUnhealthy;
    return std::nullopt;
}

std::string_view color_code(HealthCategory c) {
    switch (c) {
        case HealthCategory::Good: return "#00e400";
        case HealthCategory::Moderate: return "#ffff00";
        case HealthCategory::UnhealthySensitive: return "#ff7e00";
        case HealthCategory::Unhealthy: return "#ff0000";
        case HealthCategory::VeryUnhealthy: return "#8f3f97";
        case HealthCategory::Hazardous: return "#7e0023";
    }
    return "#000000";
}

CategoryInterval category_interval(HealthCategory c) {
    switch (c) {
        case HealthCategory::Good: return {0, 50};
        case HealthCategory::Moderate: return {51, 100};
        case HealthCategory::UnhealthySensitive: return {101, 150};
        case HealthCategory::Unhealthy: return {151, 200};
        case HealthCategory::VeryUnhealthy: return {201, 300};
        case HealthCategory::Hazardous: return {301, 400};
    }
    return {0, 0};
}

HealthCategory categorize(double index) {
    if (!(index >= 0))
        throw DataError("categorize: index must be non-negative, got " +
                        std::to_string(index));
    const double rounded = std::floor(index + 0.5); // half up
    constexpr HealthCategory cats[] = {
        HealthCategory::Good,      HealthCategory::Moderate,
        HealthCategory::UnhealthySensitive, HealthCategory::Unhealthy,
        HealthCategory::VeryUnhealthy,      HealthCategory::Hazardous};
    for (HealthCategory c : cats) {
        const auto iv = category_interval(c);
        if (rounded >= iv.lo && rounded <= iv.hi) return c;
    }
    return HealthCategory::Hazardous; // above 400 clamps
}

std::string_view to_string(HumidexRating r) {
    switch (r) {
        case HumidexRating::Comfort: return "Comfort";
        case HumidexRating::NoComfort: return "No Comfort";
        case HumidexRating::SomeDiscomfort: return "Some Discomfort";
        case HumidexRating::GreatDiscomfort: return "Great Discomfort";
        case HumidexRating::Dangerous: return "Dangerous";
        case HumidexRating::HeatStroke: return "Heat Stroke";
    }
    return "?";
}

HumidexRating rate_humidex(double value) {
    if (value < 30) return HumidexRating::Comfort;
    if (value < 40) return HumidexRating::NoComfort;
    if (value < 46) return HumidexRating::SomeDiscomfort;
    if (value < 55) return HumidexRating::GreatDiscomfort;
    if (value < 61) return HumidexRating::Dangerous;
    return HumidexRating::HeatStroke;
}

} // namespace iaq
