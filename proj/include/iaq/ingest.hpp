#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "iaq/channels.hpp"
#include "iaq/timeseries.hpp"

namespace iaq {

// ---- timestamps ----

// ISO-8601 UTC, e.g. "2016-08-24T10:00:00Z" -> epoch seconds. Throws DataError.
std::int64_t parse_iso8601_utc(const std::string& text);
std::string format_iso8601_utc(std::int64_t epoch_seconds);

// Shortest round-trip decimal form (used everywhere a float is serialized, so
// identical runs produce identical bytes).
std::string format_double(double v);

// ---- CSV wire format ----

// Row of the canonical schema: timestamp,sensor_id,channel,value,unit.
struct RawRecord {
    std::int64_t timestamp = 0;
    std::string sensor_id;
    ChannelKind channel = ChannelKind::CO2;
    double value = 0;
    std::string unit;
};

struct RejectedRow {
    std::size_t line_no = 0; // 1-based, header is line 1
    std::string text;
    std::string reason;
};

struct ParseResult {
    std::vector<RawRecord> records;
    std::vector<RejectedRow> rejects;
};

// Strict parse: a missing/wrong header is a DataError; malformed rows land in
// rejects with a reason, never silently dropped. Unit must be the channel's
// canonical unit.
ParseResult parse_csv(std::istream& in);
ParseResult parse_csv_file(const std::string& path);

void write_csv(std::ostream& out, const std::vector<RawRecord>& records);
void write_csv_file(const std::string& path, const std::vector<RawRecord>& records);

// Hourly-grid assembly: records for (channel, sensor) are averaged per grid
// slot; empty slots become gaps. Output length is exactly n_samples.
// sensor_id empty = accept any sensor.
TimeSeries to_series(const std::vector<RawRecord>& records, ChannelKind channel,
                     const std::string& sensor_id, std::int64_t start,
                     std::size_t n_samples, std::int64_t step = 3600);

std::vector<RawRecord> series_to_records(const TimeSeries& series,
                                         const std::string& sensor_id);

// ---- synthetic scenario ----

struct ChannelSpec {
    double level = 0;     // baseline
    double amplitude = 0; // daily-cycle amplitude
    double sigma = 0;     // measurement noise std
};

struct Episode {
    ChannelKind channel = ChannelKind::CO;
    int start = 0;      // sample offset
    int duration = 0;   // samples
    double magnitude = 0;
};

struct GapSpec {
    ChannelKind channel = ChannelKind::CO;
    std::vector<int> offsets;
};

struct Scenario {
    std::int64_t start = 0;
    int days = 3;
    std::int64_t step = 3600;
    std::string sensor_id = "ESB.10.236";
    std::map<ChannelKind, ChannelSpec> channels;
    std::vector<Episode> episodes;
    std::vector<GapSpec> gaps;
    std::uint64_t seed = 1;

    int n_samples() const { return days * 24; }
};

// Three days from 2016-08-23T00:00:00Z; all ten channels with plausible
// levels, daily cycles, and sensor noise; a day-2 CO bump of +0.13 ppm with
// a matching O2 dip.
Scenario default_scenario();

// JSON scenario file; missing fields fall back to the defaults above.
Scenario load_scenario(const std::string& path);
std::string scenario_to_json(const Scenario& sc);

// Deterministic per seed (explicit Box-Muller over mt19937_64, so the byte
// stream does not depend on the standard library's normal distribution).
// truth = level + amplitude * sin(2*pi*(k-6)/24) + episode bumps.
std::map<ChannelKind, TimeSeries> generate(const Scenario& sc, bool with_noise = true,
                                           bool with_gaps = true);
std::map<ChannelKind, TimeSeries> generate_truth(const Scenario& sc);

} // namespace iaq
