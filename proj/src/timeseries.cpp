#include "iaq/timeseries.hpp"

#include <string>

#include "iaq/errors.hpp"

namespace iaq {

std::vector<double> TimeSeries::dense(std::string_view what) const {
    std::vector<double> out;
    out.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!values[i])
            throw DataError(std::string(what) + ": series has a gap at sample " +
                            std::to_string(i));
        out.push_back(*values[i]);
    }
    return out;
}

} // namespace iaq
