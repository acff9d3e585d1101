#include "iaq/metrics.hpp"

#include <cmath>
#include <string>

#include "iaq/errors.hpp"

namespace iaq {

MetricsReport evaluate(const std::vector<double>& y_r, const std::vector<double>& y_m,
                       R2Mode mode, bool with_mape) {
    if (y_r.size() != y_m.size())
        throw DataError("evaluate: length mismatch (" + std::to_string(y_r.size()) +
                        " vs " + std::to_string(y_m.size()) + ")");
    if (y_r.empty())
        throw DataError("evaluate: empty series");
    const auto N = static_cast<double>(y_r.size());

    MetricsReport rep;
    if (with_mape) {
        double acc = 0;
        for (std::size_t i = 0; i < y_r.size(); ++i) {
            if (y_r[i] == 0)
                throw DataError("MAPE undefined: reference value is 0 at sample " +
                                std::to_string(i));
            acc += std::abs(y_r[i] - y_m[i]) / std::abs(y_r[i]);
        }
        rep.mape = 100.0 / N * acc;
    }

    double sq = 0;
    for (std::size_t i = 0; i < y_r.size(); ++i) {
        const double d = y_r[i] - y_m[i];
        sq += d * d;
    }
    rep.rmse = std::sqrt(sq / N);

    double denom = 0;
    if (mode == R2Mode::AsPrinted) {
        for (double v : y_m) denom += v * v;
    } else {
        double mean = 0;
        for (double v : y_r) mean += v;
        mean /= N;
        for (double v : y_r) denom += (v - mean) * (v - mean);
    }
    if (denom == 0)
        throw DataError(mode == R2Mode::AsPrinted
                            ? "R2 undefined: forecast series is identically zero"
                            : "R2 undefined: reference series is constant");
    rep.r2 = 1.0 - sq / denom;
    return rep;
}

MetricsReport evaluate(const TimeSeries& y_r, const TimeSeries& y_m, R2Mode mode,
                       bool with_mape) {
    return evaluate(y_r.dense("evaluate reference"), y_m.dense("evaluate forecast"),
                    mode, with_mape);
}

} // namespace iaq
