#ifndef SANA_CORE_METRICS_HPP
#define SANA_CORE_METRICS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "core/types.hpp"

namespace sana {

// Run counters and time series. Everything here is also derivable from the
// exported traces; the collector just saves a re-parse.
struct MetricsCollector {
    // infection
    std::vector<std::uint32_t> infected_series;    // post-tick counts
    std::vector<std::uint32_t> quarantined_series;
    std::uint32_t peak_infected = 0;
    std::uint32_t final_infected = 0;
    std::uint64_t infections_total = 0;
    std::uint64_t disinfections = 0;
    std::uint64_t quarantines = 0;

    // packets
    std::uint64_t packets_sent = 0;
    std::uint64_t packets_delivered = 0;
    std::uint64_t packets_dropped = 0;
    std::uint64_t packets_unroutable = 0;
    std::uint64_t packet_hops = 0;
    std::uint64_t packet_arrivals = 0;

    // protection plane
    std::uint64_t substances_emitted = 0;
    std::uint64_t substance_hops = 0;

    // inspections / checks
    std::uint64_t inspections = 0;
    std::uint64_t checks_performed = 0;
    std::uint64_t checks_redundant = 0;

    // alerts
    std::uint64_t alerts_total = 0;
    std::uint64_t family_match_alerts = 0;
    std::map<FamilyId, Tick> family_introduced_at;
    std::map<FamilyId, Tick> family_first_alert;
    std::uint64_t mutant_packets_sent = 0;
    std::uint64_t mutant_alerts = 0;

    // administration
    std::uint64_t admin_lines = 0;
    std::uint64_t local_log_lines = 0; // unread baseline logs

    // staleness: per sampled component, versions behind the server
    std::uint64_t staleness_samples = 0;
    std::uint64_t staleness_total_lag = 0;

    // self-management
    std::vector<double> min_level_series;
    std::vector<double> covered_fraction_series; // nodes at/above threshold

    // population
    std::vector<std::uint32_t> population_series;
    std::vector<std::uint32_t> roaming_series;
    std::uint64_t cells_minted = 0;
    std::uint64_t cells_expired = 0;

    std::uint64_t events_executed = 0;
};

} // namespace sana

#endif
