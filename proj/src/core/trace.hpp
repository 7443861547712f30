#ifndef SANA_CORE_TRACE_HPP
#define SANA_CORE_TRACE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "core/types.hpp"

namespace sana {

enum class TraceLevel : std::uint8_t { none = 0, summary = 1, full = 2 };

TraceLevel trace_level_from_string(const std::string& s);
const char* to_string(TraceLevel level);

// Line-delimited run traces. Everything a report claims must be
// recomputable from these files, so records are written even when the
// in-memory metrics already counted them.
class TraceSink {
public:
    explicit TraceSink(TraceLevel level = TraceLevel::full) : level_(level) {}

    TraceLevel level() const { return level_; }

    // events.csv: tick,kind,node,detail
    void event(Tick tick, const char* kind, NodeId node, const std::string& detail);
    // infections.csv: tick,node,status
    void infection(Tick tick, NodeId node, const char* status);
    // audit.csv: tick,node,component,event_kind,verdict
    void audit(Tick tick, NodeId node, const std::string& component, const char* event_kind,
               const char* verdict);
    // substances.csv: tick,substance_id,node,action
    void substance(Tick tick, SubstanceId id, NodeId node, const char* action);
    // levels.csv: tick,node,level,attraction
    void level(Tick tick, NodeId node, double level, double attraction);
    // checks.csv: tick,node,component,check_key
    void check(Tick tick, NodeId node, const std::string& component, const std::string& key);
    // population.csv: tick,type,count
    void population(Tick tick, const char* type, std::uint64_t count);
    // administrator feed, free-form lines
    void admin(Tick tick, const std::string& text);

    const std::vector<std::string>& events() const { return events_; }
    const std::vector<std::string>& infections() const { return infections_; }
    const std::vector<std::string>& audits() const { return audit_; }
    const std::vector<std::string>& substances() const { return substances_; }
    const std::vector<std::string>& levels() const { return levels_; }
    const std::vector<std::string>& checks() const { return checks_; }
    const std::vector<std::string>& populations() const { return population_; }
    const std::vector<std::string>& admin_feed() const { return admin_; }

    // Writes all trace files into `dir` (created if needed). At level
    // summary only infections, levels, population and the admin feed are
    // written; at level none nothing is.
    void write(const std::string& dir) const;

private:
    TraceLevel level_;
    std::vector<std::string> events_;
    std::vector<std::string> infections_;
    std::vector<std::string> audit_;
    std::vector<std::string> substances_;
    std::vector<std::string> levels_;
    std::vector<std::string> checks_;
    std::vector<std::string> population_;
    std::vector<std::string> admin_;
};

// Fixed-precision float formatting so traces and reports are byte-stable.
std::string format_real(double v);

} // namespace sana

#endif
