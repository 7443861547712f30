#ifndef SANA_CORE_SUBSTANCES_HPP
#define SANA_CORE_SUBSTANCES_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "core/receptors.hpp"
#include "core/types.hpp"

namespace sana {

enum class MessageType : std::uint8_t {
    warning,
    alert,
    quarantine_request,
    status_report,
    attraction_beacon,
    death_record,
    cell_release,
};

const char* to_string(MessageType type);

enum class AlertKind : std::uint8_t {
    sig_exact,  // exact signature match on a packet or file event
    sig_family, // family match opened up by the danger level
    silent,     // node failed to answer a status probe
    stale,      // component database lags the newest known version
    eviction,   // environment removed a misbehaving component
};

const char* to_string(AlertKind kind);

// Immutable message body shared by every forwarded copy of a substance.
struct SubstanceBody {
    SubstanceId id = 0;
    MessageType type = MessageType::status_report;
    NodeId origin = kNoNode;
    Tick emitted_at = 0;
    std::uint32_t initial_hops = 0;
    std::uint32_t time_to_live = 0;
    std::vector<ReceptorLock> locks;
    std::string emitter; // component label, for traces

    // alert / warning fields
    AlertKind alert_kind = AlertKind::sig_exact;
    SigId sig = kNoSig;
    FamilyId family = 0;
    std::uint32_t generation = 0;
    NodeId implicated = kNoNode;   // node an alert points at
    ComponentId source = 0;        // alerting component

    // beacon fields
    NodeId focus = kNoNode; // node the beacon pulls toward
    double strength = 0.0;

    // status / release / death fields
    std::string detail;
    std::uint32_t db_version = 0;
    double report_level = 0.0;
    std::string cell_type_tag;
    std::uint32_t release_count = 0;
};

using SubstanceBodyPtr = std::shared_ptr<const SubstanceBody>;

// Per-node substance plumbing: forwarding set (default: all neighbors,
// prunable by self-management) and at-most-once processing per substance.
class SubstanceFabric {
public:
    void reset(std::uint32_t node_count);

    SubstanceId next_id() { return next_id_++; }
    void remember(SubstanceBodyPtr body) { bodies_[body->id] = std::move(body); }
    const SubstanceBodyPtr& body(SubstanceId id) const { return bodies_.at(id); }

    // Returns true the first time a (substance, node) pair is seen.
    bool first_visit(SubstanceId id, NodeId node) {
        return processed_[node].insert(id).second;
    }

    bool visited(SubstanceId id, NodeId node) const {
        return processed_[node].count(id) != 0;
    }

    const std::vector<NodeId>& forward_set(NodeId node) const { return forward_sets_[node]; }
    void set_forward_set(NodeId node, std::vector<NodeId> targets) {
        forward_sets_[node] = std::move(targets);
    }

private:
    SubstanceId next_id_ = 1;
    std::map<SubstanceId, SubstanceBodyPtr> bodies_;
    std::vector<std::set<SubstanceId>> processed_;
    std::vector<std::vector<NodeId>> forward_sets_;
};

// True iff the component's keys open at least one of the substance's locks.
bool can_read(const SubstanceBody& body, const std::vector<ReceptorKey>& keys);

} // namespace sana

#endif
