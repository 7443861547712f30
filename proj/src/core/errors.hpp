#ifndef SANA_CORE_ERRORS_HPP
#define SANA_CORE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sana {

// Base for all domain errors raised by the simulator core.
class SimError : public std::runtime_error {
public:
    SimError(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

struct DisconnectedGraph : SimError {
    explicit DisconnectedGraph(const std::string& w) : SimError("DisconnectedGraph", w) {}
};
struct DanglingEdge : SimError {
    explicit DanglingEdge(const std::string& w) : SimError("DanglingEdge", w) {}
};
struct DuplicateNodeId : SimError {
    explicit DuplicateNodeId(const std::string& w) : SimError("DuplicateNodeId", w) {}
};
struct PastDue : SimError {
    explicit PastDue(const std::string& w) : SimError("PastDue", w) {}
};
struct UnroutablePacket : SimError {
    explicit UnroutablePacket(const std::string& w) : SimError("UnroutablePacket", w) {}
};
struct DuplicateRegistration : SimError {
    explicit DuplicateRegistration(const std::string& w) : SimError("DuplicateRegistration", w) {}
};
struct NoViolationOnRecord : SimError {
    explicit NoViolationOnRecord(const std::string& w) : SimError("NoViolationOnRecord", w) {}
};
struct UnmintedLock : SimError {
    explicit UnmintedLock(const std::string& w) : SimError("UnmintedLock", w) {}
};

// Scenario validation failure with per-field diagnostics.
class InvalidScenario : public SimError {
public:
    explicit InvalidScenario(const std::string& field, const std::string& why)
        : SimError("InvalidScenario", field + ": " + why), field_(field) {}

    const std::string& field() const { return field_; }

private:
    std::string field_;
};

} // namespace sana

#endif
