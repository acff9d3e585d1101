#include "iaq/indices.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "iaq/errors.hpp"

namespace iaq {

namespace {

// Band membership honoring the tie-break: tables are ordered least severe
// first, so the first containing band wins a shared boundary.
bool contains(const BreakpointBand& b, double c) {
    const bool above_lo = b.lo_exclusive ? c > b.conc_lo : c >= b.conc_lo;
    return above_lo && c <= b.conc_hi;
}

} // namespace

IndexValue interpolate_index(const BreakpointTable& table, double concentration) {
    if (table.orientation != Orientation::Ascending)
        throw UsageError("interpolate_index requires an ascending table; use "
                         "interpolate_oxygen_index for the O2 table");
    if (!(concentration >= 0))
        throw DataError("concentration must be non-negative, got " +
                        std::to_string(concentration));

    const auto& bands = table.bands;
    double value = -1;
    for (std::size_t i = 0; i < bands.size(); ++i) {
        const auto& b = bands[i];
        if (contains(b, concentration)) {
            value = b.idx_lo + (concentration - b.conc_lo) * (b.idx_hi - b.idx_lo) /
                                   (b.conc_hi - b.conc_lo);
            break;
        }
        // Between this band and the next: bridge the edge points linearly so
        // the mapping stays continuous and monotone over the gap.
        if (i + 1 < bands.size() && concentration > b.conc_hi &&
            concentration < bands[i + 1].conc_lo) {
            const auto& n = bands[i + 1];
            value = b.idx_hi + (concentration - b.conc_hi) * (n.idx_lo - b.idx_hi) /
                                   (n.conc_lo - b.conc_hi);
            break;
        }
    }
    if (value < 0)
        value = bands.back().idx_hi; // above the top band: clamp to 400

    return {value, table.channel, categorize(value)};
}

IndexValue interpolate_oxygen_index(const BreakpointTable& table, double percent,
                                    bool corrected) {
    if (table.orientation != Orientation::DescendingConcentration)
        throw UsageError("interpolate_oxygen_index requires the descending O2 table");
    if (!(percent > 0 && percent <= 100))
        throw DataError("O2 percent must be in (0, 100], got " + std::to_string(percent));

    const auto& bands = table.bands;
    if (percent > bands.front().conc_hi)
        return {0.0, table.channel, categorize(0.0)}; // above the top band

    for (const auto& b : bands) {
        if (!contains(b, percent)) continue;
        double value;
        if (corrected) {
            // Physically ordered: the index rises as oxygen falls.
            value = b.idx_lo + (b.conc_hi - percent) * (b.idx_hi - b.idx_lo) /
                                   (b.conc_hi - b.conc_lo);
        } else {
            // As the formula is written: conc_hi -> idx_hi, conc_lo -> idx_lo,
            // so the index drops with falling oxygen inside a band.
            value = b.idx_hi - (b.conc_hi - percent) * (b.idx_lo - b.idx_hi) /
                                   (b.conc_lo - b.conc_hi);
        }
        return {value, table.channel, categorize(value)};
    }
    // Only reachable below the lowest band's conc_lo (percent <= 0 excluded).
    const auto& last = bands.back();
    const double value = corrected ? last.idx_hi : last.idx_lo;
    return {value, table.channel, categorize(value)};
}

IndexValue overall_iaqi(const std::vector<IndexValue>& subindices, Aggregation mode) {
    if (subindices.empty())
        throw DataError("overall index of an empty sub-index list");
    double value = 0;
    if (mode == Aggregation::Max) {
        for (const auto& s : subindices) value = std::max(value, s.value);
    } else {
        for (const auto& s : subindices) value += s.value;
        value /= static_cast<double>(subindices.size());
    }
    return {value, std::nullopt, categorize(value)};
}

Humidex humidex(double temp_c, double rh_percent) {
    if (!(rh_percent >= 0 && rh_percent <= 100))
        throw DataError("relative humidity must be in [0, 100], got " +
                        std::to_string(rh_percent));
    if (!(temp_c >= -40 && temp_c <= 60))
        throw DataError("temperature out of sane range [-40, 60] degC: " +
                        std::to_string(temp_c));
    const double vapor = 6.112 * std::pow(10.0, 7.5 * temp_c / (237.7 + temp_c)) *
                         rh_percent / 100.0;
    const double h = temp_c + (5.0 / 9.0) * (vapor - 10.0);
    return {h, rate_humidex(h)};
}

double eiaqi(const IndexValue& iaqi, const Humidex& h, const EiaqiWeights& w) {
    return w.w_h * h.value + w.w_iaqi * iaqi.value;
}

Weightage weightage_label(HealthCategory iaqi_cat, HumidexRating humidex_rating,
                          const WeightageConfig& cfg) {
    const int sum = cfg.category_weights[static_cast<int>(iaqi_cat)] +
                    cfg.rating_weights[static_cast<int>(humidex_rating)];
    for (const auto& band : cfg.labels)
        if (sum >= band.min_sum) return {sum, band.label};
    return {sum, cfg.labels.back().label};
}

} // namespace iaq
