#pragma once

#include <map>
#include <string>
#include <vector>

#include "iaq/channels.hpp"

namespace iaq {

// One concentration band mapped linearly onto one index band.
// lo_exclusive marks a band that excludes its own conc_lo (used by the O2
// top band, whose lower edge belongs to the next band down).
struct BreakpointBand {
    double conc_lo = 0;
    double conc_hi = 0;
    double idx_lo = 0;
    double idx_hi = 0;
    HealthCategory category = HealthCategory::Good;
    bool lo_exclusive = false;
};

enum class Orientation {
    Ascending,               // index rises with concentration (all gases but O2)
    DescendingConcentration, // bands ordered by falling concentration (O2)
};

struct BreakpointTable {
    ChannelKind channel = ChannelKind::CO2;
    Orientation orientation = Orientation::Ascending;
    // Ascending: sorted by conc_lo increasing. Descending: by conc_lo decreasing,
    // i.e. severity increasing either way. Index bands partition [0, 400].
    std::vector<BreakpointBand> bands;
};

// Built-in tables for the eight gas channels. Temperature/Humidity have none.
const std::map<ChannelKind, BreakpointTable>& default_breakpoint_tables();

// JSON array of objects {channel, conc_lo, conc_hi, idx_lo, idx_hi, category}
// with optional "lo_exclusive". Replaces the defaults per channel present.
std::map<ChannelKind, BreakpointTable> load_breakpoint_tables(const std::string& path);

// Structural checks (ordering, index partition). Throws DataError.
void validate_table(const BreakpointTable& t);

} // namespace iaq
