#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "iaq/breakpoints.hpp"
#include "iaq/channels.hpp"
#include "iaq/errors.hpp"
#include "iaq/fkalman.hpp"
#include "iaq/indices.hpp"
#include "iaq/ingest.hpp"
#include "iaq/metrics.hpp"
#include "iaq/sysid.hpp"
#include "iaq/timeseries.hpp"

namespace py = pybind11;
using namespace iaq;

namespace {

ChannelKind channel_arg(const std::string& name) {
    const auto ch = parse_channel(name);
    if (!ch) throw UsageError("unknown channel '" + name + "'");
    return *ch;
}

// NaN marks a gap on the python side; TimeSeries uses disengaged optionals.
TimeSeries series_of(const std::vector<double>& values) {
    TimeSeries s;
    s.values.reserve(values.size());
    for (double v : values) {
        if (std::isnan(v))
            s.values.push_back(std::nullopt);
        else
            s.values.push_back(v);
    }
    return s;
}

std::vector<double> plain_of(const TimeSeries& s) {
    std::vector<double> out;
    out.reserve(s.size());
    for (const auto& v : s.values) out.push_back(v ? *v : std::numeric_limits<double>::quiet_NaN());
    return out;
}

FractionalTransferFunction ftf_of(const std::vector<std::pair<double, double>>& num,
                                  const std::vector<std::pair<double, double>>& den) {
    FractionalTransferFunction ftf;
    ftf.num.clear();
    for (const auto& [c, e] : num) ftf.num.push_back({c, e});
    for (const auto& [c, e] : den) ftf.den.push_back({c, e});
    validate_ftf(ftf);
    return ftf;
}

py::list terms_out(const std::vector<FtfTerm>& terms) {
    py::list out;
    for (const auto& t : terms) out.append(py::make_tuple(t.coef, t.exp));
    return out;
}

py::dict index_out(const IndexValue& iv) {
    py::dict d;
    d["value"] = iv.value;
    d["category"] = std::string(to_string(iv.category));
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "sensor fusion, air-quality indices, and fractional system "
              "identification primitives";

    py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    m.def("channels", [] {
        std::vector<std::string> names;
        for (ChannelKind c : all_channels()) names.emplace_back(to_string(c));
        return names;
    }, "names of the ten supported channels");

    m.def("gl_weights", [](double alpha, int horizon) {
        return gl_weights(alpha, horizon).w;
    }, py::arg("alpha"), py::arg("horizon") = 64,
       "binomial fractional-difference weights c_0..c_horizon");

    m.def("matern_poles", [](double l) {
        const double lambda = std::sqrt(5.0) / l;
        return continuous_poles(matern_companion(lambda));
    }, py::arg("l"),
       "continuous poles of the length-scale model, cluster means");

    m.def("fuse",
          [](const std::vector<double>& values, double l, double dt, double alpha,
             double q, double r, int horizon, bool center, bool init_from_first,
             double p0) {
              const auto model = matern_model(l, dt, q, r, alpha, horizon);
              FuseOptions opts;
              opts.center = center;
              opts.init_from_first = init_from_first;
              opts.p0 = p0;
              return plain_of(fuse_series(model, series_of(values), opts));
          },
          py::arg("values"), py::arg("l") = 5.0, py::arg("dt") = 1.0,
          py::arg("alpha") = 1.0, py::arg("q") = 1e-6, py::arg("r") = 0.25,
          py::arg("horizon") = 64, py::arg("center") = true,
          py::arg("init_from_first") = true, py::arg("p0") = 0.1,
          "smooth one channel with the fractional Kalman filter; NaN samples "
          "are gaps and come back filled with predictions");

    m.def("simulate_ftf",
          [](const std::vector<std::pair<double, double>>& num,
             const std::vector<std::pair<double, double>>& den,
             const std::vector<double>& input, double dt) {
              return simulate_ftf(ftf_of(num, den), input, dt);
          },
          py::arg("num"), py::arg("den"), py::arg("input"), py::arg("dt"),
          "discrete response of sum(num)/sum(den) in s^exp terms; terms are "
          "(coef, exp) pairs");

    m.def("identify",
          [](const std::vector<double>& response, const std::vector<double>& input,
             double dt, const std::vector<std::pair<double, double>>& num,
             const std::vector<std::pair<double, double>>& den, int restarts,
             int max_iterations, std::uint64_t seed, bool fit_numerator) {
              IdentifyOptions opts;
              opts.restarts = restarts;
              opts.max_iterations = max_iterations;
              opts.seed = seed;
              opts.fit_numerator = fit_numerator;
              const auto rep = identify(response, input, dt, ftf_of(num, den), opts);
              py::dict d;
              d["num"] = terms_out(rep.model.num);
              d["den"] = terms_out(rep.model.den);
              d["eps_max"] = rep.eps_max;
              d["eps_mse"] = rep.eps_mse;
              d["iterations"] = rep.iterations;
              d["converged"] = rep.converged;
              d["commensurate_alpha"] = rep.model.commensurate_alpha();
              return d;
          },
          py::arg("response"), py::arg("input"), py::arg("dt"), py::arg("num"),
          py::arg("den"), py::arg("restarts") = 5,
          py::arg("max_iterations") = 3000, py::arg("seed") = 1,
          py::arg("fit_numerator") = false,
          "output-error fit of a fractional transfer function starting from "
          "the given template");

    m.def("evaluate",
          [](const std::vector<double>& y_ref, const std::vector<double>& y_model,
             const std::string& r2, bool mape) {
              R2Mode mode;
              if (r2 == "printed") mode = R2Mode::AsPrinted;
              else if (r2 == "centered") mode = R2Mode::Centered;
              else throw UsageError("r2 must be 'printed' or 'centered'");
              const auto rep = evaluate(y_ref, y_model, mode, mape);
              py::dict d;
              d["mape"] = rep.mape ? py::cast(*rep.mape) : py::none();
              d["rmse"] = rep.rmse;
              d["r2"] = rep.r2;
              return d;
          },
          py::arg("y_ref"), py::arg("y_model"), py::arg("r2") = "printed",
          py::arg("mape") = true,
          "MAPE/RMSE/R2 of a forecast against a reference");

    m.def("iaqi",
          [](const std::string& channel, double concentration, bool o2_corrected) {
              const ChannelKind ch = channel_arg(channel);
              const auto& tables = default_breakpoint_tables();
              const auto it = tables.find(ch);
              if (it == tables.end())
                  throw UsageError("channel '" + channel + "' has no index table");
              const auto iv = ch == ChannelKind::O2
                                  ? interpolate_oxygen_index(it->second, concentration,
                                                             o2_corrected)
                                  : interpolate_index(it->second, concentration);
              return index_out(iv);
          },
          py::arg("channel"), py::arg("concentration"),
          py::arg("o2_corrected") = false,
          "per-channel sub-index from the built-in breakpoint tables");

    m.def("overall_iaqi",
          [](const std::vector<double>& subindices, const std::string& mode) {
              Aggregation agg;
              if (mode == "max") agg = Aggregation::Max;
              else if (mode == "mean") agg = Aggregation::Mean;
              else throw UsageError("mode must be 'max' or 'mean'");
              std::vector<IndexValue> ivs;
              for (double v : subindices) ivs.push_back({v, std::nullopt, categorize(v)});
              return index_out(overall_iaqi(ivs, agg));
          },
          py::arg("subindices"), py::arg("mode") = "max",
          "aggregate per-channel sub-indices into the overall index");

    m.def("humidex", [](double temp_c, double rh_percent) {
        const auto h = iaq::humidex(temp_c, rh_percent);
        py::dict d;
        d["value"] = h.value;
        d["rating"] = std::string(to_string(h.rating));
        return d;
    }, py::arg("temp_c"), py::arg("rh_percent"),
       "heat-discomfort value and rating from temperature and humidity");

    m.def("eiaqi",
          [](double iaqi, double humidex_value, double w_h, double w_iaqi) {
              IndexValue iv{iaqi, std::nullopt, categorize(iaqi)};
              Humidex h{humidex_value, rate_humidex(humidex_value)};
              return eiaqi(iv, h, {w_h, w_iaqi});
          },
          py::arg("iaqi"), py::arg("humidex"), py::arg("w_h") = 1.0,
          py::arg("w_iaqi") = 1.0,
          "weighted numeric blend of the overall index and the humidex");

    m.def("weightage",
          [](const std::string& category, const std::string& rating) {
              const auto cat = parse_category(category);
              if (!cat) throw UsageError("unknown category '" + category + "'");
              std::optional<HumidexRating> rat;
              for (int i = 0; i < kCategoryCount; ++i) {
                  const auto r = static_cast<HumidexRating>(i);
                  if (to_string(r) == rating) rat = r;
              }
              if (!rat) throw UsageError("unknown humidex rating '" + rating + "'");
              const auto w = weightage_label(*cat, *rat);
              py::dict d;
              d["total"] = w.total;
              d["label"] = w.label;
              return d;
          },
          py::arg("category"), py::arg("rating"),
          "categorical combination of a health category and a humidex rating");

    m.def("categorize", [](double index) {
        return std::string(to_string(categorize(index)));
    }, py::arg("index"), "health category of an index value");

    m.def("scenario_series",
          [](std::uint64_t seed, int days, bool noise, bool gaps) {
              Scenario sc = default_scenario();
              sc.seed = seed;
              sc.days = days;
              const auto by_channel = generate(sc, noise, gaps);
              py::dict d;
              for (const auto& [ch, s] : by_channel)
                  d[py::str(std::string(to_string(ch)))] = plain_of(s);
              return d;
          },
          py::arg("seed") = 1, py::arg("days") = 3, py::arg("noise") = true,
          py::arg("gaps") = true,
          "synthetic hourly multi-channel series keyed by channel name; gaps "
          "are NaN");

    m.def("scenario_truth",
          [](std::uint64_t seed, int days) {
              Scenario sc = default_scenario();
              sc.seed = seed;
              sc.days = days;
              py::dict d;
              for (const auto& [ch, s] : generate_truth(sc))
                  d[py::str(std::string(to_string(ch)))] = plain_of(s);
              return d;
          },
          py::arg("seed") = 1, py::arg("days") = 3,
          "noise-free truth for the same synthetic scenario");
}
