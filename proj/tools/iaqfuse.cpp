#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "iaq/breakpoints.hpp"
#include "iaq/channels.hpp"
#include "iaq/errors.hpp"
#include "iaq/fkalman.hpp"
#include "iaq/indices.hpp"
#include "iaq/ingest.hpp"
#include "iaq/metrics.hpp"
#include "iaq/sysid.hpp"
#include "iaq/timeseries.hpp"

namespace {

using namespace iaq;

struct Grid {
    std::int64_t start = 0;
    std::size_t n = 0;
    std::int64_t step = 3600;
};

// Hourly grid spanning the records. Slot boundaries align to whole steps.
Grid grid_of(const std::vector<RawRecord>& records, std::int64_t step) {
    if (records.empty())
        throw DataError("no samples");
    std::int64_t lo = records.front().timestamp, hi = lo;
    for (const auto& r : records) {
        lo = std::min(lo, r.timestamp);
        hi = std::max(hi, r.timestamp);
    }
    Grid g;
    g.step = step;
    g.start = lo - ((lo % step) + step) % step;
    g.n = static_cast<std::size_t>((hi - g.start) / step) + 1;
    return g;
}

std::set<ChannelKind> channels_present(const std::vector<RawRecord>& records) {
    std::set<ChannelKind> out;
    for (const auto& r : records) out.insert(r.channel);
    return out;
}

void report_rejects(const ParseResult& pr, const std::string& rejects_path) {
    if (pr.rejects.empty()) return;
    std::cerr << pr.rejects.size() << " row(s) rejected\n";
    if (rejects_path.empty()) {
        for (const auto& r : pr.rejects)
            std::cerr << "  line " << r.line_no << ": " << r.reason << "\n";
        return;
    }
    std::ofstream out(rejects_path);
    if (!out)
        throw DataError("cannot open rejects file: " + rejects_path);
    out << "line,reason\n";
    for (const auto& r : pr.rejects)
        out << r.line_no << ',' << r.reason << '\n';
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw DataError("cannot open for writing: " + path);
    return out;
}

std::vector<ChannelKind> parse_channel_args(const std::vector<std::string>& names) {
    std::vector<ChannelKind> out;
    for (const auto& n : names) {
        const auto ch = parse_channel(n);
        if (!ch)
            throw UsageError("unknown channel: " + n);
        out.push_back(*ch);
    }
    return out;
}

// ---- compute-index ----

struct IndexArgs {
    std::string input, output, breakpoints, rejects, sensor;
    std::string aggregate = "max";
    double w_h = 1.0, w_iaqi = 1.0;
    bool o2_corrected = false;
};

int cmd_compute_index(const IndexArgs& a, const std::string& format) {
    const auto pr = parse_csv_file(a.input);
    report_rejects(pr, a.rejects);
    const auto tables = a.breakpoints.empty() ? default_breakpoint_tables()
                                              : load_breakpoint_tables(a.breakpoints);
    const Grid grid = grid_of(pr.records, 3600);
    const Aggregation agg =
        a.aggregate == "mean" ? Aggregation::Mean : Aggregation::Max;
    const EiaqiWeights weights{a.w_h, a.w_iaqi};

    std::map<ChannelKind, TimeSeries> series;
    for (ChannelKind ch : channels_present(pr.records))
        series[ch] = to_series(pr.records, ch, a.sensor, grid.start, grid.n, grid.step);

    std::vector<ChannelKind> gas_cols;
    for (ChannelKind ch : all_channels())
        if (is_gas(ch) && series.count(ch)) gas_cols.push_back(ch);

    const bool have_th = series.count(ChannelKind::Temperature) &&
                         series.count(ChannelKind::Humidity);

    nlohmann::json jrows = nlohmann::json::array();
    auto out = open_out(a.output);
    if (format == "csv") {
        out << "timestamp";
        for (ChannelKind ch : gas_cols) out << ",iaqi_" << to_string(ch);
        out << ",iaqi_overall,category,humidex,humidex_rating,eiaqi,"
               "weightage_sum,weightage_label\n";
    }

    for (std::size_t k = 0; k < grid.n; ++k) {
        std::vector<IndexValue> subs;
        std::vector<std::optional<IndexValue>> per_gas;
        for (ChannelKind ch : gas_cols) {
            const auto& v = series[ch].values[k];
            if (!v) {
                per_gas.push_back(std::nullopt);
                continue;
            }
            const auto& table = tables.at(ch);
            const IndexValue idx =
                ch == ChannelKind::O2
                    ? interpolate_oxygen_index(table, *v, a.o2_corrected)
                    : interpolate_index(table, *v);
            per_gas.push_back(idx);
            subs.push_back(idx);
        }
        std::optional<IndexValue> overall;
        if (!subs.empty()) overall = overall_iaqi(subs, agg);

        std::optional<Humidex> hx;
        if (have_th) {
            const auto& tv = series[ChannelKind::Temperature].values[k];
            const auto& hv = series[ChannelKind::Humidity].values[k];
            if (tv && hv) hx = humidex(*tv, *hv);
        }
        std::optional<double> ei;
        std::optional<Weightage> wt;
        if (overall && hx) {
            ei = eiaqi(*overall, *hx, weights);
            wt = weightage_label(overall->category, hx->rating);
        }

        const std::string ts =
            format_iso8601_utc(grid.start + static_cast<std::int64_t>(k) * grid.step);
        if (format == "csv") {
            out << ts;
            for (const auto& g : per_gas)
                out << ',' << (g ? format_double(g->value) : "");
            out << ',' << (overall ? format_double(overall->value) : "") << ','
                << (overall ? to_string(overall->category) : "") << ','
                << (hx ? format_double(hx->value) : "") << ','
                << (hx ? to_string(hx->rating) : "") << ','
                << (ei ? format_double(*ei) : "") << ','
                << (wt ? std::to_string(wt->total) : "") << ','
                << (wt ? wt->label : "") << '\n';
        } else {
            nlohmann::json row;
            row["timestamp"] = ts;
            for (std::size_t i = 0; i < gas_cols.size(); ++i)
                if (per_gas[i])
                    row[std::string("iaqi_") +
                        std::string(to_string(gas_cols[i]))] = per_gas[i]->value;
            if (overall) {
                row["iaqi_overall"] = overall->value;
                row["category"] = std::string(to_string(overall->category));
            }
            if (hx) {
                row["humidex"] = hx->value;
                row["humidex_rating"] = std::string(to_string(hx->rating));
            }
            if (ei) row["eiaqi"] = *ei;
            if (wt) {
                row["weightage_sum"] = wt->total;
                row["weightage_label"] = wt->label;
            }
            jrows.push_back(row);
        }
    }
    if (format != "csv") out << jrows.dump(2) << '\n';
    return 0;
}

// ---- fuse ----

struct FuseArgs {
    std::string input, output, plot, rejects, sensor;
    std::vector<std::string> channels;
    double l = 5.0, alpha = 1.0, q = 1e-6, r = 0.25;
    int horizon = 64;
    bool no_center = false, no_init_from_first = false;
};

int cmd_fuse(const FuseArgs& a) {
    const auto pr = parse_csv_file(a.input);
    report_rejects(pr, a.rejects);
    const Grid grid = grid_of(pr.records, 3600);
    const double dt = static_cast<double>(grid.step) / 3600.0;

    std::vector<ChannelKind> chans;
    if (a.channels.empty()) {
        for (ChannelKind ch : all_channels())
            if (channels_present(pr.records).count(ch)) chans.push_back(ch);
    } else {
        chans = parse_channel_args(a.channels);
    }
    if (chans.empty())
        throw DataError("no samples");

    FuseOptions fopts;
    fopts.center = !a.no_center;
    fopts.init_from_first = !a.no_init_from_first;

    const double lambda = std::sqrt(5.0) / a.l;
    char lam[32];
    std::snprintf(lam, sizeof lam, "%.5f", lambda);
    std::cerr << "matern length scale l=" << format_double(a.l) << " -> lambda=" << lam
              << ", alpha=" << format_double(a.alpha) << ", horizon=" << a.horizon
              << "\n";

    const auto model = matern_model(a.l, dt, a.q, a.r, a.alpha, a.horizon);

    std::map<ChannelKind, TimeSeries> raw, fused;
    std::vector<RawRecord> out_records;
    for (ChannelKind ch : chans) {
        raw[ch] = to_series(pr.records, ch, a.sensor, grid.start, grid.n, grid.step);
        fused[ch] = fuse_series(model, raw[ch], fopts);
        const std::string sensor =
            a.sensor.empty()
                ? (pr.records.empty() ? std::string() : pr.records.front().sensor_id)
                : a.sensor;
        for (auto& rec : series_to_records(fused[ch], sensor))
            out_records.push_back(std::move(rec));
    }
    std::sort(out_records.begin(), out_records.end(),
              [](const RawRecord& x, const RawRecord& y) {
                  if (x.timestamp != y.timestamp) return x.timestamp < y.timestamp;
                  return static_cast<int>(x.channel) < static_cast<int>(y.channel);
              });
    write_csv_file(a.output, out_records);

    if (!a.plot.empty()) {
        auto out = open_out(a.plot);
        out << "timestamp";
        for (ChannelKind ch : chans)
            out << ',' << to_string(ch) << "_raw," << to_string(ch) << "_fused";
        out << '\n';
        for (std::size_t k = 0; k < grid.n; ++k) {
            out << format_iso8601_utc(grid.start +
                                      static_cast<std::int64_t>(k) * grid.step);
            for (ChannelKind ch : chans) {
                const auto& rv = raw[ch].values[k];
                const auto& fv = fused[ch].values[k];
                out << ',' << (rv ? format_double(*rv) : "") << ','
                    << (fv ? format_double(*fv) : "");
            }
            out << '\n';
        }
    }
    return 0;
}

// ---- identify ----

struct IdentifyArgs {
    std::string input, output, template_path, sensor, start;
    std::string channel;
    std::string input_channel; // excitation; unit step when empty
    int n = 78;
    double dt = 1.0;
    IdentifyOptions opts;
};

int cmd_identify(const IdentifyArgs& a, const std::string& format) {
    const auto tmpl = load_ftf(a.template_path);
    const auto pr = parse_csv_file(a.input);
    report_rejects(pr, "");
    const auto ch = parse_channel(a.channel);
    if (!ch)
        throw UsageError("unknown channel: " + a.channel);

    const Grid grid = a.start.empty()
                          ? grid_of(pr.records, 3600)
                          : Grid{parse_iso8601_utc(a.start),
                                 static_cast<std::size_t>(a.n), 3600};
    const auto series = to_series(pr.records, *ch, a.sensor, grid.start,
                                  static_cast<std::size_t>(a.n), grid.step);
    const auto y = series.dense("identify response");

    std::vector<double> u(y.size(), 1.0);
    if (!a.input_channel.empty()) {
        const auto ich = parse_channel(a.input_channel);
        if (!ich)
            throw UsageError("unknown channel: " + a.input_channel);
        u = to_series(pr.records, *ich, a.sensor, grid.start,
                      static_cast<std::size_t>(a.n), grid.step)
                .dense("identify input");
    }

    const FitReport rep = identify(y, u, a.dt, tmpl, a.opts);
    {
        auto out = open_out(a.output);
        out << ftf_to_json(rep.model) << '\n';
    }
    if (format == "json") {
        nlohmann::json j;
        j["eps_mse"] = rep.eps_mse;
        j["eps_max"] = rep.eps_max;
        j["iterations"] = rep.iterations;
        j["converged"] = rep.converged;
        j["commensurate_alpha"] = rep.model.commensurate_alpha();
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << "eps_mse=" << format_double(rep.eps_mse)
                  << " eps_max=" << format_double(rep.eps_max)
                  << " iterations=" << rep.iterations
                  << " converged=" << (rep.converged ? "yes" : "no")
                  << " commensurate_alpha="
                  << format_double(rep.model.commensurate_alpha()) << '\n';
    }
    return 0;
}

// ---- evaluate ----

struct EvaluateArgs {
    std::string truth, output;
    std::vector<std::string> series_paths;
    std::string r2 = "printed";
    bool no_mape = false;
};

int cmd_evaluate(const EvaluateArgs& a, const std::string& format) {
    const auto truth_pr = parse_csv_file(a.truth);
    report_rejects(truth_pr, "");
    const Grid grid = grid_of(truth_pr.records, 3600);
    const R2Mode mode = a.r2 == "centered" ? R2Mode::Centered : R2Mode::AsPrinted;

    struct Row {
        std::string file;
        ChannelKind channel;
        MetricsReport rep;
    };
    std::vector<Row> rows;
    for (const auto& path : a.series_paths) {
        const auto pr = parse_csv_file(path);
        report_rejects(pr, "");
        for (ChannelKind ch : all_channels()) {
            if (!channels_present(pr.records).count(ch) ||
                !channels_present(truth_pr.records).count(ch))
                continue;
            const auto y_r =
                to_series(truth_pr.records, ch, "", grid.start, grid.n, grid.step);
            const auto y_m =
                to_series(pr.records, ch, "", grid.start, grid.n, grid.step);
            // Label rows by basename so output does not depend on where inputs live.
            rows.push_back({std::filesystem::path(path).filename().string(), ch,
                            evaluate(y_r, y_m, mode, !a.no_mape)});
        }
    }
    if (rows.empty())
        throw DataError("no overlapping channels between truth and series files");

    std::ostream* os = &std::cout;
    std::ofstream file_out;
    if (!a.output.empty()) {
        file_out = open_out(a.output);
        os = &file_out;
    }
    if (format == "json") {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& r : rows) {
            nlohmann::json row;
            row["file"] = r.file;
            row["channel"] = std::string(to_string(r.channel));
            if (r.rep.mape) row["mape"] = *r.rep.mape;
            row["rmse"] = r.rep.rmse;
            row["r2"] = r.rep.r2;
            j.push_back(row);
        }
        *os << j.dump(2) << '\n';
    } else {
        *os << "file,channel,mape,rmse,r2\n";
        for (const auto& r : rows)
            *os << r.file << ',' << to_string(r.channel) << ','
                << (r.rep.mape ? format_double(*r.rep.mape) : "") << ','
                << format_double(r.rep.rmse) << ',' << format_double(r.rep.r2)
                << '\n';
    }
    return 0;
}

// ---- simulate ----

struct SimulateArgs {
    std::string scenario, output, truth_output;
};

int cmd_simulate(const SimulateArgs& a, const std::optional<std::uint64_t>& seed) {
    Scenario sc = a.scenario.empty() ? default_scenario() : load_scenario(a.scenario);
    if (seed) sc.seed = *seed;

    const auto write_all = [&](const std::map<ChannelKind, TimeSeries>& m,
                               const std::string& path) {
        std::vector<RawRecord> records;
        for (const auto& [ch, s] : m)
            for (auto& rec : series_to_records(s, sc.sensor_id))
                records.push_back(std::move(rec));
        std::sort(records.begin(), records.end(),
                  [](const RawRecord& x, const RawRecord& y) {
                      if (x.timestamp != y.timestamp) return x.timestamp < y.timestamp;
                      return static_cast<int>(x.channel) < static_cast<int>(y.channel);
                  });
        write_csv_file(path, records);
    };
    write_all(generate(sc), a.output);
    if (!a.truth_output.empty()) write_all(generate_truth(sc), a.truth_output);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Air-quality sensor fusion: index computation, fractional Kalman "
                 "fusion, transfer-function identification, metrics, synthetic data"};
    app.set_config("--config")->description(
        "key=value config file; subcommand options go in [subcommand] sections");
    app.require_subcommand(1);

    std::string format = "csv";
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    std::optional<std::uint64_t> seed;
    app.add_option("--seed", seed, "override the scenario/search seed");

    IndexArgs ia;
    auto* ci = app.add_subcommand("compute-index",
                                  "per-hour sub-indices, overall index, humidex, "
                                  "combined index and weightage from a CSV");
    ci->add_option("--input", ia.input, "input CSV")->required();
    ci->add_option("--output", ia.output, "output file")->required();
    ci->add_option("--breakpoints", ia.breakpoints, "breakpoint table JSON");
    ci->add_option("--rejects", ia.rejects, "write rejected rows here");
    ci->add_option("--sensor", ia.sensor, "only this sensor id");
    ci->add_option("--aggregate", ia.aggregate, "overall index aggregation")
        ->check(CLI::IsMember({"max", "mean"}))
        ->capture_default_str();
    ci->add_option("--w-h", ia.w_h, "humidex weight")->capture_default_str();
    ci->add_option("--w-iaqi", ia.w_iaqi, "index weight")->capture_default_str();
    ci->add_flag("--o2-corrected", ia.o2_corrected,
                 "O2 index rises as oxygen falls (physically ordered variant)");

    FuseArgs fa;
    auto* fu = app.add_subcommand("fuse", "fractional Kalman fusion per channel");
    fu->add_option("--input", fa.input, "input CSV")->required();
    fu->add_option("--output", fa.output, "fused CSV (canonical schema)")->required();
    fu->add_option("--plot", fa.plot, "also write a wide raw/fused CSV");
    fu->add_option("--rejects", fa.rejects, "write rejected rows here");
    fu->add_option("--sensor", fa.sensor, "only this sensor id");
    fu->add_option("--channel", fa.channels, "channel(s) to fuse; default all present");
    fu->add_option("--l", fa.l, "correlation length (m)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    fu->add_option("--alpha", fa.alpha, "fractional order in (0,2]")
        ->check(CLI::Range(1e-9, 2.0))
        ->capture_default_str();
    fu->add_option("--q", fa.q, "process noise spectral density")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    fu->add_option("--r", fa.r, "measurement noise variance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    fu->add_option("--horizon", fa.horizon, "memory truncation (samples)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    fu->add_flag("--no-center", fa.no_center, "do not center on the series mean");
    fu->add_flag("--no-init-from-first", fa.no_init_from_first,
                 "start the state at zero instead of the first sample");

    IdentifyArgs da;
    auto* id = app.add_subcommand("identify",
                                  "fit a fractional transfer function by "
                                  "output-error simplex search");
    id->add_option("--input", da.input, "input CSV")->required();
    id->add_option("--channel", da.channel, "response channel")->required();
    id->add_option("--template", da.template_path, "template model JSON")->required();
    id->add_option("--output", da.output, "identified model JSON")->required();
    id->add_option("--sensor", da.sensor, "only this sensor id");
    id->add_option("--start", da.start, "window start (ISO-8601 UTC)");
    id->add_option("--n", da.n, "window length in samples")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    id->add_option("--dt", da.dt, "sample period for the model")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    id->add_option("--input-channel", da.input_channel,
                   "excitation channel; unit step when absent");
    id->add_option("--restarts", da.opts.restarts, "search restarts")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    id->add_option("--max-iter", da.opts.max_iterations, "simplex iterations per start")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    id->add_flag("--fit-numerator", da.opts.fit_numerator,
                 "also fit numerator terms (fixed by default)");

    EvaluateArgs ea;
    auto* ev = app.add_subcommand("evaluate", "MAPE/RMSE/R2 against a reference");
    ev->add_option("--truth", ea.truth, "reference CSV")->required();
    ev->add_option("--series", ea.series_paths, "series CSV(s) to score")->required();
    ev->add_option("--output", ea.output, "write table here instead of stdout");
    ev->add_option("--r2", ea.r2, "R2 denominator convention")
        ->check(CLI::IsMember({"printed", "centered"}))
        ->capture_default_str();
    ev->add_flag("--no-mape", ea.no_mape, "skip MAPE (allows zero reference values)");

    SimulateArgs sa;
    auto* si = app.add_subcommand("simulate", "generate the synthetic scenario");
    si->add_option("--scenario", sa.scenario, "scenario JSON; built-in default");
    si->add_option("--output", sa.output, "output CSV")->required();
    si->add_option("--truth-output", sa.truth_output,
                   "also write the noiseless, gap-free truth");

    // Global options may follow the subcommand name.
    for (auto* sub : {ci, fu, id, ev, si}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return static_cast<int>(ExitCode::Usage);
    }

    try {
        if (ci->parsed()) return cmd_compute_index(ia, format);
        if (fu->parsed()) return cmd_fuse(fa);
        if (id->parsed()) {
            if (seed) da.opts.seed = *seed;
            return cmd_identify(da, format);
        }
        if (ev->parsed()) return cmd_evaluate(ea, format);
        if (si->parsed()) return cmd_simulate(sa, seed);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::Usage);
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::Data);
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::Numerical);
    }
    return 0;
}
