#ifndef SANA_CORE_HARNESS_HPP
#define SANA_CORE_HARNESS_HPP

#include <optional>
#include <string>
#include <vector>

#include "core/scenario.hpp"
#include "core/trace.hpp"
#include "core/types.hpp"

namespace sana {

struct RunOutput {
    std::string report_json;
};

// One deterministic run. When `out_dir` is non-empty, report.json, the
// resolved scenario and the trace files are written there.
RunOutput run_scenario(const Scenario& scenario, std::optional<Mode> mode_override,
                       std::optional<std::uint64_t> seed_override, TraceLevel level,
                       const std::string& out_dir);

// Side-by-side runs over the same topology/adversary/seed. Needs at least
// two modes; per-mode outputs land in <out_dir>/<mode>/.
std::string compare_modes(const Scenario& scenario, const std::vector<Mode>& modes,
                          TraceLevel level, const std::string& out_dir);

// Per-seed runs plus mean/min/max/stddev aggregation; per-seed outputs land
// in <out_dir>/seed<N>/.
std::string seed_sweep(const Scenario& scenario, const std::vector<std::uint64_t>& seeds,
                       TraceLevel level, const std::string& out_dir);

} // namespace sana

#endif
