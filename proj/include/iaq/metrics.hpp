#pragma once

#include <optional>
#include <vector>

#include "iaq/timeseries.hpp"

namespace iaq {

enum class R2Mode {
    AsPrinted, // 1 - sum((y_m - y_r)^2) / sum(y_m^2), uncentered denominator
    Centered,  // textbook: 1 - sum((y_m - y_r)^2) / sum((y_r - mean(y_r))^2)
};

struct MetricsReport {
    // Disengaged when MAPE was not requested (it requires all |y_r| > 0).
    std::optional<double> mape;
    double rmse = 0;
    double r2 = 0;
};

// y_r is the reference/observed series, y_m the model/forecast.
//   MAPE = (100/N) sum |y_r - y_m| / |y_r|
//   RMSE = sqrt((1/N) sum (y_r - y_m)^2)
//   R2   per R2Mode.
// Lengths must match; a zero reference sample with MAPE requested is a
// domain error naming the sample index.
MetricsReport evaluate(const std::vector<double>& y_r, const std::vector<double>& y_m,
                       R2Mode mode = R2Mode::AsPrinted, bool with_mape = true);

// Gap-intolerant wrapper.
MetricsReport evaluate(const TimeSeries& y_r, const TimeSeries& y_m,
                       R2Mode mode = R2Mode::AsPrinted, bool with_mape = true);

} // namespace iaq
