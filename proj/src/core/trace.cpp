#include "core/trace.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "core/errors.hpp"

namespace sana {

TraceLevel trace_level_from_string(const std::string& s) {
    if (s == "none") return TraceLevel::none;
    if (s == "summary") return TraceLevel::summary;
    if (s == "full") return TraceLevel::full;
    throw SimError("BadTraceLevel", "unknown trace level '" + s + "'");
}

const char* to_string(TraceLevel level) {
    switch (level) {
    case TraceLevel::none: return "none";
    case TraceLevel::summary: return "summary";
    case TraceLevel::full: return "full";
    }
    return "?";
}

std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

void TraceSink::event(Tick tick, const char* kind, NodeId node, const std::string& detail) {
    if (level_ < TraceLevel::full) return;
    events_.push_back(std::to_string(tick) + "," + kind + "," + std::to_string(node) + "," +
                      detail);
}

void TraceSink::infection(Tick tick, NodeId node, const char* status) {
    if (level_ < TraceLevel::summary) return;
    infections_.push_back(std::to_string(tick) + "," + std::to_string(node) + "," + status);
}

void TraceSink::audit(Tick tick, NodeId node, const std::string& component,
                      const char* event_kind, const char* verdict) {
    if (level_ < TraceLevel::full) return;
    audit_.push_back(std::to_string(tick) + "," + std::to_string(node) + "," + component + "," +
                     event_kind + "," + verdict);
}

void TraceSink::substance(Tick tick, SubstanceId id, NodeId node, const char* action) {
    if (level_ < TraceLevel::full) return;
    substances_.push_back(std::to_string(tick) + "," + std::to_string(id) + "," +
                          std::to_string(node) + "," + action);
}

void TraceSink::level(Tick tick, NodeId node, double level, double attraction) {
    if (level_ < TraceLevel::summary) return;
    levels_.push_back(std::to_string(tick) + "," + std::to_string(node) + "," +
                      format_real(level) + "," + format_real(attraction));
}

void TraceSink::check(Tick tick, NodeId node, const std::string& component,
                      const std::string& key) {
    if (level_ < TraceLevel::full) return;
    checks_.push_back(std::to_string(tick) + "," + std::to_string(node) + "," + component + "," +
                      key);
}

void TraceSink::population(Tick tick, const char* type, std::uint64_t count) {
    if (level_ < TraceLevel::summary) return;
    population_.push_back(std::to_string(tick) + "," + type + "," + std::to_string(count));
}

void TraceSink::admin(Tick tick, const std::string& text) {
    if (level_ < TraceLevel::summary) return;
    admin_.push_back(std::to_string(tick) + " " + text);
}

namespace {

void write_lines(const std::filesystem::path& file, const char* header,
                 const std::vector<std::string>& lines) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw SimError("IoError", "cannot write " + file.string());
    }
    out << header << "\n";
    for (const auto& line : lines) {
        out << line << "\n";
    }
}

} // namespace

void TraceSink::write(const std::string& dir) const {
    if (level_ == TraceLevel::none) return;
    std::filesystem::path base(dir);
    std::filesystem::create_directories(base);
    write_lines(base / "infections.csv", "tick,node,status", infections_);
    write_lines(base / "levels.csv", "tick,node,level,attraction", levels_);
    write_lines(base / "population.csv", "tick,type,count", population_);
    write_lines(base / "admin_feed.txt", "# administrator feed", admin_);
    if (level_ == TraceLevel::full) {
        write_lines(base / "events.csv", "tick,kind,node,detail", events_);
        write_lines(base / "audit.csv", "tick,node,component,event_kind,verdict", audit_);
        write_lines(base / "substances.csv", "tick,substance_id,node,action", substances_);
        write_lines(base / "checks.csv", "tick,node,component,check_key", checks_);
    }
}

} // namespace sana
