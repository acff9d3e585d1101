#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "iaq/breakpoints.hpp"
#include "iaq/channels.hpp"

namespace iaq {

// A computed index value. channel is empty for the overall aggregate.
struct IndexValue {
    double value = 0;
    std::optional<ChannelKind> channel;
    HealthCategory category = HealthCategory::Good;
};

// Piecewise-linear index for ascending tables:
//   I = idx_lo + (C - conc_lo) * (idx_hi - idx_lo) / (conc_hi - conc_lo).
// Concentrations between two bands bridge linearly between the surrounding
// band edges so the mapping stays continuous and monotone. A value on a shared
// boundary resolves to the less severe band. Above the top band clamps to 400.
IndexValue interpolate_index(const BreakpointTable& table, double concentration);

// Index for the descending-concentration O2 table, applied exactly as the
// underlying formula is written:
//   I = idx_hi - (conc_hi - C) * (idx_lo - idx_hi) / (conc_lo - conc_hi),
// which maps conc_hi -> idx_hi, conc_lo -> idx_lo inside each band, so the
// index *drops* as oxygen falls through a band (19%->51 while 20.9%->100).
// corrected=true flips each band (conc_hi -> idx_lo) so severity rises as
// oxygen falls, for callers that want the physically ordered variant.
// Concentrations above the top band clamp to index 0.
IndexValue interpolate_oxygen_index(const BreakpointTable& table, double percent,
                                    bool corrected = false);

enum class Aggregation { Max, Mean };

// Overall index across per-channel sub-indices. Max is the reporting
// convention; Mean is selectable.
IndexValue overall_iaqi(const std::vector<IndexValue>& subindices,
                        Aggregation mode = Aggregation::Max);

struct Humidex {
    double value = 0;
    HumidexRating rating = HumidexRating::Comfort;
};

// h = T + (5/9) * (6.112 * 10^(7.5 T / (237.7 + T)) * RH/100 - 10).
// RH outside [0,100] or T outside [-40,60] degC is a domain error.
Humidex humidex(double temp_c, double rh_percent);

struct EiaqiWeights {
    double w_h = 1.0;
    double w_iaqi = 1.0;
    double total() const { return w_h + w_iaqi; }
};

// Numeric blend: w_h * humidex + w_iaqi * iaqi.
double eiaqi(const IndexValue& iaqi, const Humidex& h, const EiaqiWeights& w = {});

// Categorical weightage scheme: each health category and each humidex rating
// carries a small integer weight (default 3 down to -2 by severity rank); the
// sum maps onto a seven-label scale.
struct WeightageConfig {
    std::array<int, kCategoryCount> category_weights{3, 2, 1, 0, -1, -2};
    std::array<int, kCategoryCount> rating_weights{3, 2, 1, 0, -1, -2};
    // Order: sum >= 6 Best; 5 Better; 3..4 Good; 1..2 Moderate; -1..0 Poor;
    // -3..-2 Very Poor; <= -4 Hazardous.
    struct LabelBand {
        int min_sum;
        std::string label;
    };
    std::vector<LabelBand> labels{
        {6, "Best"}, {5, "Better"}, {3, "Good"},      {1, "Moderate"},
        {-1, "Poor"}, {-3, "Very Poor"}, {-1000, "Hazardous"},
    };
};

struct Weightage {
    int total = 0;
    std::string label;
};

Weightage weightage_label(HealthCategory iaqi_cat, HumidexRating humidex_rating,
                          const WeightageConfig& cfg = {});

} // namespace iaq
