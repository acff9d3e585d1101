#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "iaq/channels.hpp"

namespace iaq {

// Uniformly sampled channel. Timestamps are implicit: t_k = start + k*step.
// A disengaged optional is a gap marker; it never carries a value.
struct TimeSeries {
    ChannelKind channel = ChannelKind::CO2;
    std::int64_t start = 0;     // UTC epoch seconds
    std::int64_t step = 3600;   // seconds between samples
    std::string unit;
    std::vector<std::optional<double>> values;

    std::size_t size() const { return values.size(); }

    bool has_gaps() const {
        for (const auto& v : values)
            if (!v) return true;
        return false;
    }

    // Throws DataError naming the first gap. Use before gap-intolerant math.
    std::vector<double> dense(std::string_view what) const;
};

} // namespace iaq
