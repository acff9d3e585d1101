#include "iaq/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "iaq/errors.hpp"

namespace iaq {

// ---- timestamps (proleptic Gregorian; no timezone math, UTC only) ----

namespace {

std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const int yoe = y - era * 400;
    const int doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const int doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return static_cast<std::int64_t>(era) * 146097 + doe - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const int doe = static_cast<int>(z - era * 146097);
    const int yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const int mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y = static_cast<int>(yoe + era * 400) + (m <= 2);
}

bool parse_int(std::string_view s, int& out) {
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

} // namespace

std::int64_t parse_iso8601_utc(const std::string& text) {
    // YYYY-MM-DDTHH:MM:SSZ, exactly.
    const auto fail = [&]() -> std::int64_t {
        throw DataError("bad UTC timestamp (want YYYY-MM-DDTHH:MM:SSZ): " + text);
    };
    if (text.size() != 20 || text[4] != '-' || text[7] != '-' || text[10] != 'T' ||
        text[13] != ':' || text[16] != ':' || text[19] != 'Z')
        return fail();
    int y, mo, d, h, mi, s;
    const std::string_view t(text);
    if (!parse_int(t.substr(0, 4), y) || !parse_int(t.substr(5, 2), mo) ||
        !parse_int(t.substr(8, 2), d) || !parse_int(t.substr(11, 2), h) ||
        !parse_int(t.substr(14, 2), mi) || !parse_int(t.substr(17, 2), s))
        return fail();
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || s > 59)
        return fail();
    const std::int64_t days = days_from_civil(y, mo, d);
    int ry, rm, rd;
    civil_from_days(days, ry, rm, rd);
    if (ry != y || rm != mo || rd != d) // e.g. February 30 normalizes away
        return fail();
    return days * 86400 + h * 3600 + mi * 60 + s;
}

std::string format_iso8601_utc(std::int64_t epoch_seconds) {
    std::int64_t days = epoch_seconds / 86400;
    std::int64_t sod = epoch_seconds % 86400;
    if (sod < 0) {
        sod += 86400;
        days -= 1;
    }
    int y, m, d;
    civil_from_days(days, y, m, d);
    char buf[48];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ", y, m, d,
                  static_cast<int>(sod / 3600), static_cast<int>(sod / 60 % 60),
                  static_cast<int>(sod % 60));
    return buf;
}

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

// ---- CSV ----

namespace {

constexpr std::string_view kHeader = "timestamp,sensor_id,channel,value,unit";

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto next = line.find(sep, pos);
        if (next == std::string_view::npos) {
            out.push_back(line.substr(pos));
            break;
        }
        out.push_back(line.substr(pos, next - pos));
        pos = next + 1;
    }
    return out;
}

std::string_view strip_cr(std::string_view s) {
    if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
    return s;
}

} // namespace

ParseResult parse_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || strip_cr(line) != kHeader)
        throw DataError("missing or wrong CSV header; expected '" +
                        std::string(kHeader) + "'");
    ParseResult result;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view sv = strip_cr(line);
        if (sv.empty()) continue;
        const auto reject = [&](std::string reason) {
            result.rejects.push_back({line_no, std::string(sv), std::move(reason)});
        };
        const auto fields = split(sv, ',');
        if (fields.size() != 5) {
            reject("expected 5 fields, got " + std::to_string(fields.size()));
            continue;
        }
        RawRecord rec;
        try {
            rec.timestamp = parse_iso8601_utc(std::string(fields[0]));
        } catch (const DataError& e) {
            reject(e.what());
            continue;
        }
        rec.sensor_id = std::string(fields[1]);
        const auto ch = parse_channel(fields[2]);
        if (!ch) {
            reject("unknown channel '" + std::string(fields[2]) + "'");
            continue;
        }
        rec.channel = *ch;
        const auto res = std::from_chars(fields[3].data(),
                                         fields[3].data() + fields[3].size(),
                                         rec.value);
        if (res.ec != std::errc() || res.ptr != fields[3].data() + fields[3].size() ||
            !std::isfinite(rec.value)) {
            reject("bad numeric value '" + std::string(fields[3]) + "'");
            continue;
        }
        rec.unit = std::string(fields[4]);
        if (rec.unit != canonical_unit(rec.channel)) {
            reject("unit '" + rec.unit + "' does not match channel " +
                   std::string(to_string(rec.channel)) + " (want " +
                   std::string(canonical_unit(rec.channel)) + ")");
            continue;
        }
        result.records.push_back(std::move(rec));
    }
    return result;
}

ParseResult parse_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open CSV file: " + path);
    return parse_csv(in);
}

void write_csv(std::ostream& out, const std::vector<RawRecord>& records) {
    out << kHeader << '\n';
    for (const auto& r : records)
        out << format_iso8601_utc(r.timestamp) << ',' << r.sensor_id << ','
            << to_string(r.channel) << ',' << format_double(r.value) << ','
            << r.unit << '\n';
}

void write_csv_file(const std::string& path, const std::vector<RawRecord>& records) {
    std::ofstream out(path);
    if (!out)
        throw DataError("cannot open for writing: " + path);
    write_csv(out, records);
}

TimeSeries to_series(const std::vector<RawRecord>& records, ChannelKind channel,
                     const std::string& sensor_id, std::int64_t start,
                     std::size_t n_samples, std::int64_t step) {
    if (n_samples < 1)
        throw DataError("to_series: n_samples must be >= 1");
    TimeSeries s;
    s.channel = channel;
    s.start = start;
    s.step = step;
    s.unit = std::string(canonical_unit(channel));
    s.values.assign(n_samples, std::nullopt);

    std::vector<double> sums(n_samples, 0.0);
    std::vector<std::size_t> counts(n_samples, 0);
    for (const auto& r : records) {
        if (r.channel != channel) continue;
        if (!sensor_id.empty() && r.sensor_id != sensor_id) continue;
        const std::int64_t off = r.timestamp - start;
        if (off < 0) continue;
        const std::int64_t slot = off / step;
        if (slot >= static_cast<std::int64_t>(n_samples)) continue;
        sums[static_cast<std::size_t>(slot)] += r.value;
        counts[static_cast<std::size_t>(slot)] += 1;
    }
    for (std::size_t i = 0; i < n_samples; ++i)
        if (counts[i] > 0)
            s.values[i] = sums[i] / static_cast<double>(counts[i]);
    return s;
}

std::vector<RawRecord> series_to_records(const TimeSeries& series,
                                         const std::string& sensor_id) {
    std::vector<RawRecord> out;
    out.reserve(series.values.size());
    for (std::size_t k = 0; k < series.values.size(); ++k) {
        if (!series.values[k]) continue;
        RawRecord r;
        r.timestamp = series.start + static_cast<std::int64_t>(k) * series.step;
        r.sensor_id = sensor_id;
        r.channel = series.channel;
        r.value = *series.values[k];
        r.unit = series.unit.empty() ? std::string(canonical_unit(series.channel))
                                     : series.unit;
        out.push_back(std::move(r));
    }
    return out;
}

// ---- synthetic scenario ----

Scenario default_scenario() {
    Scenario sc;
    sc.start = parse_iso8601_utc("2016-08-23T00:00:00Z");
    sc.days = 3;
    sc.seed = 1;
    sc.channels = {
        {ChannelKind::CO, {1.2, 0.15, 0.05}},
        {ChannelKind::CO2, {420.0, 20.0, 6.0}},
        {ChannelKind::O2, {20.0, 0.4, 0.12}},
        {ChannelKind::H2, {8.0, 1.2, 0.4}},
        {ChannelKind::NH3, {20.0, 3.0, 1.0}},
        {ChannelKind::Ethanol, {5.0, 1.0, 0.3}},
        {ChannelKind::H2S, {0.8, 0.2, 0.07}},
        {ChannelKind::Toluene, {0.3, 0.08, 0.025}},
        {ChannelKind::Temperature, {22.0, 2.5, 0.8}},
        {ChannelKind::Humidity, {55.0, 8.0, 2.5}},
    };
    // Day-2 incident: CO rises 0.13 ppm while O2 dips.
    sc.episodes = {
        {ChannelKind::CO, 24, 24, 0.13},
        {ChannelKind::O2, 24, 24, -0.4},
    };
    return sc;
}

namespace {

ChannelKind channel_from_json_key(const std::string& key) {
    const auto ch = parse_channel(key);
    if (!ch)
        throw DataError("scenario: unknown channel '" + key + "'");
    return *ch;
}

} // namespace

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open scenario file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("scenario file " + path + ": " + e.what());
    }
    Scenario sc = default_scenario();
    if (j.contains("start")) sc.start = parse_iso8601_utc(j["start"].get<std::string>());
    if (j.contains("days")) sc.days = j["days"].get<int>();
    if (j.contains("step_seconds")) sc.step = j["step_seconds"].get<std::int64_t>();
    if (j.contains("sensor_id")) sc.sensor_id = j["sensor_id"].get<std::string>();
    if (j.contains("seed")) sc.seed = j["seed"].get<std::uint64_t>();
    if (sc.days < 1 || sc.step < 1)
        throw DataError("scenario: days and step_seconds must be positive");
    if (j.contains("channels")) {
        sc.channels.clear();
        for (const auto& [key, spec] : j["channels"].items()) {
            ChannelSpec cs;
            cs.level = spec.at("level").get<double>();
            cs.amplitude = spec.value("amplitude", 0.0);
            cs.sigma = spec.value("sigma", 0.0);
            if (cs.sigma < 0)
                throw DataError("scenario: sigma must be >= 0");
            sc.channels[channel_from_json_key(key)] = cs;
        }
    }
    if (j.contains("episodes")) {
        sc.episodes.clear();
        for (const auto& e : j["episodes"]) {
            Episode ep;
            ep.channel = channel_from_json_key(e.at("channel").get<std::string>());
            ep.start = e.at("start").get<int>();
            ep.duration = e.at("duration").get<int>();
            ep.magnitude = e.at("magnitude").get<double>();
            sc.episodes.push_back(ep);
        }
    }
    if (j.contains("gaps")) {
        sc.gaps.clear();
        for (const auto& g : j["gaps"]) {
            GapSpec gs;
            gs.channel = channel_from_json_key(g.at("channel").get<std::string>());
            gs.offsets = g.at("offsets").get<std::vector<int>>();
            sc.gaps.push_back(gs);
        }
    }
    return sc;
}

std::string scenario_to_json(const Scenario& sc) {
    nlohmann::json j;
    j["start"] = format_iso8601_utc(sc.start);
    j["days"] = sc.days;
    j["step_seconds"] = sc.step;
    j["sensor_id"] = sc.sensor_id;
    j["seed"] = sc.seed;
    j["channels"] = nlohmann::json::object();
    for (const auto& [ch, spec] : sc.channels)
        j["channels"][std::string(to_string(ch))] = {
            {"level", spec.level}, {"amplitude", spec.amplitude}, {"sigma", spec.sigma}};
    j["episodes"] = nlohmann::json::array();
    for (const auto& e : sc.episodes)
        j["episodes"].push_back({{"channel", std::string(to_string(e.channel))},
                                 {"start", e.start},
                                 {"duration", e.duration},
                                 {"magnitude", e.magnitude}});
    j["gaps"] = nlohmann::json::array();
    for (const auto& g : sc.gaps)
        j["gaps"].push_back({{"channel", std::string(to_string(g.channel))},
                             {"offsets", g.offsets}});
    return j.dump(2);
}

namespace {

// Deterministic standard normals: explicit Box-Muller over the raw mt19937_64
// stream, independent of the standard library's distribution internals.
struct NormalGen {
    std::mt19937_64 rng;
    explicit NormalGen(std::uint64_t seed) : rng(seed) {}

    double uniform01() { // in (0, 1]
        return 1.0 - static_cast<double>(rng() >> 11) * 0x1.0p-53;
    }

    double operator()() {
        const double u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.14159265358979323846 * u2);
    }
};

} // namespace

std::map<ChannelKind, TimeSeries> generate(const Scenario& sc, bool with_noise,
                                           bool with_gaps) {
    const int N = sc.n_samples();
    std::map<ChannelKind, TimeSeries> out;
    for (const auto& [ch, spec] : sc.channels) {
        TimeSeries s;
        s.channel = ch;
        s.start = sc.start;
        s.step = sc.step;
        s.unit = std::string(canonical_unit(ch));
        s.values.resize(static_cast<std::size_t>(N));

        // Per-channel substream so a channel's draw does not depend on which
        // other channels the scenario lists.
        NormalGen noise(sc.seed * 0x9e3779b97f4a7c15ULL +
                        static_cast<std::uint64_t>(ch) + 1);

        for (int k = 0; k < N; ++k) {
            double v = spec.level +
                       spec.amplitude *
                           std::sin(2.0 * 3.14159265358979323846 * (k - 6) / 24.0);
            for (const auto& e : sc.episodes)
                if (e.channel == ch && k >= e.start && k < e.start + e.duration)
                    v += e.magnitude;
            if (with_noise && spec.sigma > 0) v += spec.sigma * noise();
            s.values[static_cast<std::size_t>(k)] = v;
        }
        if (with_gaps) {
            for (const auto& g : sc.gaps) {
                if (g.channel != ch) continue;
                for (int off : g.offsets)
                    if (off >= 0 && off < N)
                        s.values[static_cast<std::size_t>(off)] = std::nullopt;
            }
        }
        out[ch] = std::move(s);
    }
    return out;
}

std::map<ChannelKind, TimeSeries> generate_truth(const Scenario& sc) {
    return generate(sc, false, false);
}

} // namespace iaq
