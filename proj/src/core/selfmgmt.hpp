#ifndef SANA_CORE_SELFMGMT_HPP
#define SANA_CORE_SELFMGMT_HPP

#include <cmath>
#include <vector>

#include "core/types.hpp"

namespace sana {

// Complementary aggregation of component security values: independent
// layers, bounded in [0,1), monotone, with diminishing returns.
inline double compute_level(const std::vector<double>& values) {
    double miss = 1.0;
    for (double v : values) {
        miss *= 1.0 - v;
    }
    return 1.0 - miss;
}

// Pull a beacon of `strength` exerts at `distance` hops from its focus.
inline double beacon_pull(double strength, double geometric, std::uint32_t distance) {
    return strength * std::pow(geometric, static_cast<double>(distance));
}

// Per-node self-management state.
struct NodeManagement {
    double level = 0.0;
    Tick below_since = kNoTick;     // set iff level < threshold
    Tick last_beacon = kNoTick;     // refresh bookkeeping
    double attraction = 0.0;        // decays every tick, beacons add to it
};

// Quarantine bookkeeping; isolation is enforced by the transport layer.
struct QuarantineRecord {
    bool active = false;
    Tick since = 0;
    Tick cleaned_at = kNoTick;  // disinfection time, kNoTick while infected
    Tick last_alert = 0;        // newest alert implicating the node
};

} // namespace sana

#endif
