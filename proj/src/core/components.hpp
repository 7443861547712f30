#ifndef SANA_CORE_COMPONENTS_HPP
#define SANA_CORE_COMPONENTS_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "core/packet.hpp"
#include "core/secenv.hpp"
#include "core/signatures.hpp"
#include "core/types.hpp"

namespace sana {

// Versioned exact-match signature database. Knowledge only grows; the
// version counts successful synchronizations against the update server.
struct SignatureDb {
    std::uint32_t version = 0;
    std::set<SigId> known;

    bool knows(SigId sig) const { return known.count(sig) != 0; }
    // Absorbs the server set; bumps the version when anything was new or
    // simply confirms freshness by matching the server version.
    void sync(const std::set<SigId>& server, std::uint32_t server_version) {
        known.insert(server.begin(), server.end());
        version = server_version;
    }
};

struct CompiledRule {
    std::optional<Protocol> protocol;
    std::optional<std::uint16_t> port;
    std::optional<NodeId> src;
    std::optional<NodeId> dst;
    std::optional<SigId> sig; // payload predicate; only payload inspectors use it
    Verdict action = Verdict::pass;
};

using RuleSet = std::vector<CompiledRule>;

// First matching rule wins; empty ruleset passes everything. When
// `payload_aware` is false, rules with payload predicates cannot match.
// Returns the verdict and the index of the matching rule (or npos).
std::pair<Verdict, std::size_t> evaluate_rules(const RuleSet& rules, const Packet& packet,
                                               bool payload_aware);

// Exact-match scan of event signatures against a database. Returns the
// matched signatures (alert per match), in payload order.
std::vector<SigId> scan_exact(const std::vector<SigId>& sigs, const SignatureDb& db);

// Classic protection component base: holds the shared policy table and the
// update-client state.
class ClassicComponent : public Component {
public:
    ClassicComponent(ComponentId id, ComponentKind kind, std::string label,
                     double security_value, const RuleSet* policy)
        : Component(id, kind, std::move(label), security_value), policy_(policy) {}

    bool has_versioned_db() const override { return false; }

    // Central-update poll; a failed updater silently stops synchronizing.
    void set_update_failed(bool failed) { update_failed_ = failed; }
    bool update_failed() const { return update_failed_; }

protected:
    const RuleSet* policy_;
    bool update_failed_ = false;

    // Shared helpers; implemented in components.cpp.
    Verdict run_header_rules(DispatchContext& ctx, const Packet& packet, bool payload_aware);
    void classic_alert(DispatchContext& ctx, AlertKind kind, SigId sig, NodeId implicated,
                       const char* what);
};

// Observes file access and process events; exact matching only.
class Antivirus : public ClassicComponent {
public:
    Antivirus(ComponentId id, double security_value, const RuleSet* policy)
        : ClassicComponent(id, ComponentKind::antivirus, "av" + std::to_string(id),
                           security_value, policy) {}

    Verdict on_packet(DispatchContext& ctx, const Packet& packet) override;
    Verdict on_file_access(DispatchContext& ctx, SigId sig) override;
    void on_timer(DispatchContext& ctx) override;
    std::uint32_t timer_period(const Params&) const override { return update_period_; }
    void set_update_period(std::uint32_t p) { update_period_ = p; }

    bool has_versioned_db() const override { return true; }
    std::uint32_t db_version() const override { return db_.version; }
    SignatureDb& db() { return db_; }

private:
    SignatureDb db_;
    std::uint32_t update_period_ = 20;
};

// Header-only filter on hosts.
class Firewall : public ClassicComponent {
public:
    Firewall(ComponentId id, double security_value, const RuleSet* policy)
        : ClassicComponent(id, ComponentKind::firewall, "fw" + std::to_string(id),
                           security_value, policy) {}

    Verdict on_packet(DispatchContext& ctx, const Packet& packet) override;
};

// Header-only filter on network equipment.
class PacketFilter : public ClassicComponent {
public:
    PacketFilter(ComponentId id, double security_value, const RuleSet* policy)
        : ClassicComponent(id, ComponentKind::packet_filter, "pf" + std::to_string(id),
                           security_value, policy) {}

    Verdict on_packet(DispatchContext& ctx, const Packet& packet) override;
};

// Perimeter detector: checks each packet completely (headers and payload)
// and drops traffic carrying signatures it knows.
class Ids : public ClassicComponent {
public:
    Ids(ComponentId id, double security_value, const RuleSet* policy)
        : ClassicComponent(id, ComponentKind::ids, "ids" + std::to_string(id), security_value,
                           policy) {}

    Verdict on_packet(DispatchContext& ctx, const Packet& packet) override;
    void on_timer(DispatchContext& ctx) override;
    std::uint32_t timer_period(const Params&) const override { return update_period_; }
    void set_update_period(std::uint32_t p) { update_period_ = p; }

    bool has_versioned_db() const override { return true; }
    std::uint32_t db_version() const override { return db_.version; }
    SignatureDb& db() { return db_; }

private:
    SignatureDb db_;
    std::uint32_t update_period_ = 20;
};

} // namespace sana

#endif
