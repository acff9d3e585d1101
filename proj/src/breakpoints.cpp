#include "iaq/breakpoints.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "iaq/errors.hpp"

namespace iaq {

namespace {

using HC = HealthCategory;

BreakpointTable ascending(ChannelKind ch,
                          std::initializer_list<std::pair<double, double>> conc) {
    // Index bands are fixed per category; concentration bands come per channel.
    constexpr std::array<std::array<double, 2>, kCategoryCount> idx{{
        {0, 50}, {51, 100}, {101, 150}, {151, 200}, {201, 300}, {301, 400}}};
    constexpr std::array<HC, kCategoryCount> cat{
        HC::Good, HC::Moderate, HC::UnhealthySensitive,
        HC::Unhealthy, HC::VeryUnhealthy, HC::Hazardous};
    BreakpointTable t;
    t.channel = ch;
    t.orientation = Orientation::Ascending;
    int i = 0;
    for (const auto& c : conc) {
        t.bands.push_back({c.first, c.second, idx[i][0], idx[i][1], cat[i], false});
        ++i;
    }
    return t;
}

std::map<ChannelKind, BreakpointTable> build_defaults() {
    std::map<ChannelKind, BreakpointTable> m;
    m[ChannelKind::CO] = ascending(ChannelKind::CO,
        {{0, 0.2}, {0.21, 2}, {2.1, 9}, {9.1, 15.4}, {15.5, 30.4}, {30.5, 50.4}});
    m[ChannelKind::CO2] = ascending(ChannelKind::CO2,
        {{0, 379}, {380, 450}, {451, 1000}, {1001, 5000}, {5001, 30000}, {30001, 40000}});
    m[ChannelKind::H2] = ascending(ChannelKind::H2,
        {{0, 1}, {1.1, 2}, {2.1, 3}, {3.1, 5}, {5.1, 8}, {8.1, 10}});
    m[ChannelKind::NH3] = ascending(ChannelKind::NH3,
        {{0, 24}, {25, 30}, {31, 50}, {51, 100}, {101, 400}, {401, 500}});
    m[ChannelKind::Ethanol] = ascending(ChannelKind::Ethanol,
        {{0, 0.49}, {0.5, 10}, {11, 49}, {50, 100}, {101, 700}, {701, 1000}});
    m[ChannelKind::H2S] = ascending(ChannelKind::H2S,
        {{0, 0.00033}, {0.00034, 1.5}, {1.6, 5}, {6, 20}, {21, 50}, {51, 100}});
    m[ChannelKind::Toluene] = ascending(ChannelKind::Toluene,
        {{0, 0.0247}, {0.0248, 0.6}, {0.7, 1.6}, {1.7, 9.8}, {9.9, 12.2}, {12.3, 100}});

    // O2 runs the other way: severity rises as the percentage falls. The top
    // band is a single published value 20.95; it is widened to (20.9, 20.95]
    // so the table partitions, with the lower edge excluded (20.9 itself
    // belongs to the Moderate band). Values above 20.95 clamp to index 0.
    BreakpointTable o2;
    o2.channel = ChannelKind::O2;
    o2.orientation = Orientation::DescendingConcentration;
    o2.bands = {
        {20.9, 20.95, 0, 50, HC::Good, true},
        {19, 20.9, 51, 100, HC::Moderate, false},
        {15, 19, 101, 150, HC::UnhealthySensitive, false},
        {12, 15, 151, 200, HC::Unhealthy, false},
        {10, 12, 201, 300, HC::VeryUnhealthy, false},
        {0, 10, 301, 400, HC::Hazardous, false},
    };
    m[ChannelKind::O2] = o2;

    for (const auto& [ch, t] : m) validate_table(t);
    return m;
}

} // namespace

const std::map<ChannelKind, BreakpointTable>& default_breakpoint_tables() {
    static const std::map<ChannelKind, BreakpointTable> tables = build_defaults();
    return tables;
}

void validate_table(const BreakpointTable& t) {
    if (t.bands.empty())
        throw DataError("breakpoint table has no bands");
    const bool asc = t.orientation == Orientation::Ascending;
    double prev_idx_hi = -1;
    for (std::size_t i = 0; i < t.bands.size(); ++i) {
        const auto& b = t.bands[i];
        if (!(b.conc_lo <= b.conc_hi))
            throw DataError("band conc_lo > conc_hi");
        if (!(b.idx_lo < b.idx_hi))
            throw DataError("band idx_lo >= idx_hi");
        if (i > 0) {
            const auto& p = t.bands[i - 1];
            if (asc && !(b.conc_lo > p.conc_hi || (b.conc_lo == p.conc_hi)))
                throw DataError("ascending bands overlap");
            if (asc && b.conc_lo < p.conc_hi)
                throw DataError("ascending bands out of order");
            if (!asc && !(b.conc_hi <= p.conc_lo))
                throw DataError("descending bands out of order");
            if (b.idx_lo <= prev_idx_hi)
                throw DataError("index bands overlap");
        }
        prev_idx_hi = b.idx_hi;
    }
    // Index bands must jointly cover [0, 400].
    if (t.bands.front().idx_lo != 0 || t.bands.back().idx_hi != 400)
        throw DataError("index bands do not span [0, 400]");
}

std::map<ChannelKind, BreakpointTable> load_breakpoint_tables(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open breakpoint file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("breakpoint file " + path + ": " + e.what());
    }
    if (!j.is_array())
        throw DataError("breakpoint file must be a JSON array of band objects");

    auto tables = default_breakpoint_tables();
    std::map<ChannelKind, BreakpointTable> loaded;
    for (const auto& row : j) {
        const std::string ch_name = row.at("channel").get<std::string>();
        const auto ch = parse_channel(ch_name);
        if (!ch)
            throw DataError("unknown channel in breakpoint file: " + ch_name);
        const std::string cat_name = row.at("category").get<std::string>();
        const auto cat = parse_category(cat_name);
        if (!cat)
            throw DataError("unknown category in breakpoint file: " + cat_name);
        BreakpointBand b;
        b.conc_lo = row.at("conc_lo").get<double>();
        b.conc_hi = row.at("conc_hi").get<double>();
        b.idx_lo = row.at("idx_lo").get<double>();
        b.idx_hi = row.at("idx_hi").get<double>();
        b.category = *cat;
        b.lo_exclusive = row.value("lo_exclusive", false);
        auto& t = loaded[*ch];
        t.channel = *ch;
        t.orientation = (*ch == ChannelKind::O2) ? Orientation::DescendingConcentration
                                                 : Orientation::Ascending;
        t.bands.push_back(b);
    }
    for (auto& [ch, t] : loaded) {
        const bool asc = t.orientation == Orientation::Ascending;
        std::sort(t.bands.begin(), t.bands.end(), [asc](const auto& a, const auto& b) {
            return asc ? a.conc_lo < b.conc_lo : a.conc_lo > b.conc_lo;
        });
        validate_table(t);
        tables[ch] = std::move(t);
    }
    return tables;
}

} // namespace iaq
