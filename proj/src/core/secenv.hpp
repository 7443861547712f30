#ifndef SANA_CORE_SECENV_HPP
#define SANA_CORE_SECENV_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "core/packet.hpp"
#include "core/receptors.hpp"
#include "core/scenario.hpp"
#include "core/signatures.hpp"
#include "core/substances.hpp"
#include "core/types.hpp"

namespace sana {

enum class Verdict : std::uint8_t { pass, alert, drop, consume };

const char* to_string(Verdict verdict);

enum class ComponentKind : std::uint8_t {
    antivirus,
    firewall,
    packet_filter,
    ids,
    artificial_cell,
    lymph_node,
    cnts,
};

const char* to_string(ComponentKind kind);

enum class ViolationKind : std::uint8_t {
    unauthorized_resource,
    failed_authentication,
    budget_exceeded,
};

const char* to_string(ViolationKind kind);

enum class Resource : std::uint8_t { storage, memory, cpu, network };

const char* to_string(Resource res);

struct ProbeAnswer {
    bool responded = false;
    std::uint32_t min_db_version = 0; // weakest updater among classic components
    bool has_versioned = false;
    double level = 0.0;
};

class Component;

// What the environment lets a component see and do during a dispatch or
// timer callback. Everything a component does to the outside world goes
// through this interface; that is the mediation the audit log checks.
class EnvServices {
public:
    virtual ~EnvServices() = default;

    virtual Tick now() const = 0;
    virtual Mode mode() const = 0;
    virtual const Params& params() const = 0;
    virtual bool warnings_enabled() const = 0;
    virtual const SignatureRegistry& signatures() const = 0;

    // Substance plane. Fills in id/origin/emitted_at; throws UnmintedLock
    // for locks the registry never issued.
    virtual SubstanceId emit_substance(NodeId from, SubstanceBody body) = 0;
    virtual ReceptorLock class_lock(const std::string& tag) const = 0;

    // Deployment facts the environment shares with infrastructure parts.
    virtual std::uint32_t hops_to_nearest_lymph(NodeId from) const = 0;
    virtual std::uint32_t hops_to_nearest_cnts(NodeId from) const = 0;
    virtual std::uint32_t hop_distance(NodeId a, NodeId b) const = 0;

    // Status probing (prober cells); targets are the node and its neighbors.
    virtual std::vector<NodeId> probe_targets(NodeId at) const = 0;
    virtual ProbeAnswer probe_node(NodeId target) = 0;

    // Update workflow (classic components).
    virtual std::uint32_t server_version() const = 0;
    virtual const std::set<SigId>& server_signatures() const = 0;

    // Response actions, mediated and logged.
    virtual void request_quarantine(NodeId node, const std::string& reason,
                                    const std::string& by) = 0;
    virtual bool node_needs_repair(NodeId node) const = 0;
    virtual bool try_disinfect(NodeId node, const std::vector<FamilyId>& families,
                               const std::string& by) = 0;
    virtual void release_cells(NodeId at, FamilyId family, std::uint32_t count,
                               const std::string& by) = 0;
    virtual void notify_admin(NodeId node, const std::string& text) = 0;

    // Local log (classic alert destination in baseline mode).
    virtual void local_log(NodeId node, const std::string& line) = 0;
};

// Per-dispatch context: carries the claim table used in coordinated modes
// to skip checks another resident component already performed.
class DispatchContext {
public:
    DispatchContext(EnvServices& services, NodeId node, bool coordinated)
        : services_(services), node_(node), coordinated_(coordinated) {}

    EnvServices& services() { return services_; }
    NodeId node() const { return node_; }

    // Records the check for the redundancy metric. Returns false when the
    // key was already claimed at this node for this event and coordination
    // is on (the caller should reuse the earlier outcome instead).
    bool claim_check(const Component& who, const std::string& key);

    // A payload signature matched somewhere in this dispatch; the node
    // counts as shielded for infection purposes.
    void note_sig_detection() { sig_detected_ = true; }
    bool sig_detected() const { return sig_detected_; }

    std::uint64_t checks_performed() const { return performed_; }
    std::uint64_t checks_redundant() const { return redundant_; }
    const std::vector<std::pair<std::string, std::string>>& check_log() const {
        return check_log_;
    }

private:
    EnvServices& services_;
    NodeId node_;
    bool coordinated_;
    bool sig_detected_ = false;
    std::set<std::string> claimed_;
    std::uint64_t performed_ = 0;
    std::uint64_t redundant_ = 0;
    std::vector<std::pair<std::string, std::string>> check_log_; // component, key
};

// A protection component living inside a node's security environment.
class Component {
public:
    Component(ComponentId id, ComponentKind kind, std::string label, double security_value)
        : id_(id), kind_(kind), label_(std::move(label)), security_value_(security_value) {}
    virtual ~Component() = default;

    ComponentId id() const { return id_; }
    ComponentKind kind() const { return kind_; }
    const std::string& label() const { return label_; }
    double security_value() const { return security_value_; }
    bool active() const { return active_; }
    void set_active(bool a) { active_ = a; }

    const std::vector<ReceptorKey>& keys() const { return keys_; }
    void add_key(ReceptorKey key) { keys_.push_back(key); }

    // Event hooks. Default behavior ignores everything.
    virtual Verdict on_packet(DispatchContext&, const Packet&) { return Verdict::pass; }
    virtual Verdict on_file_access(DispatchContext&, SigId) { return Verdict::pass; }
    virtual Verdict on_substance(DispatchContext&, const SubstanceBody&) {
        return Verdict::pass;
    }
    virtual void on_timer(DispatchContext&) {}
    virtual std::uint32_t timer_period(const Params&) const { return 0; } // 0 = no timer

    // Classic components keep a versioned signature database.
    virtual bool has_versioned_db() const { return false; }
    virtual std::uint32_t db_version() const { return 0; }

private:
    ComponentId id_;
    ComponentKind kind_;
    std::string label_;
    double security_value_;
    bool active_ = true;
    std::vector<ReceptorKey> keys_;
};

enum class EnvEventKind : std::uint8_t { packet, file_access, substance };

const char* to_string(EnvEventKind kind);

struct ViolationRecord {
    Tick tick = 0;
    ComponentId component = 0;
    ViolationKind kind = ViolationKind::failed_authentication;
    std::string detail;
};

// Per-node component registry, subscription lists and dispatch. One
// instance per node; owned by the simulation.
class SecurityEnvironment {
public:
    SecurityEnvironment() = default;
    SecurityEnvironment(NodeId node, const ReceptorRegistry* receptors)
        : node_(node), receptors_(receptors) {}

    NodeId node() const { return node_; }

    // Registration order is dispatch order. Throws DuplicateRegistration.
    void register_component(std::unique_ptr<Component> component,
                            const std::set<EnvEventKind>& events);
    // Moves a component out (cell migration) without marking it evicted.
    std::unique_ptr<Component> withdraw(ComponentId id);

    bool registered(ComponentId id) const;
    Component* find(ComponentId id);
    const Component* find(ComponentId id) const;

    // Active subscribers for an event kind, in registration order.
    std::vector<Component*> subscribers(EnvEventKind kind);
    std::vector<Component*> all_components();
    std::vector<const Component*> all_components() const;

    // Resource mediation: access is allowed iff the component holds the key
    // required for the resource; failures are recorded as violations.
    void set_resource_lock(Resource res, ReceptorLock lock);
    bool access_resource(Tick tick, ComponentId id, Resource res);

    // Per-tick action budget. Returns false (and records a violation) once
    // a component overdraws its budget within one tick.
    bool spend_action(Tick tick, ComponentId id, std::uint32_t amount, std::uint32_t budget);
    void reset_budgets();

    // Proper-working check: authentication + logged violations.
    bool check_component(Tick tick, const Component& component);

    const std::vector<ViolationRecord>& violations() const { return violations_; }
    bool has_violation(ComponentId id) const;

    // Removes the component everywhere; throws NoViolationOnRecord when no
    // violation was logged for it. Returns the eviction record detail.
    std::string evict(Tick tick, ComponentId id);

    bool blackout_active(Tick tick) const { return tick < blackout_until_; }
    void set_blackout_until(Tick until) { blackout_until_ = until; }
    Tick blackout_until() const { return blackout_until_; }

private:
    NodeId node_ = kNoNode;
    const ReceptorRegistry* receptors_ = nullptr;
    std::vector<std::unique_ptr<Component>> registry_;
    std::map<EnvEventKind, std::vector<ComponentId>> subscriptions_;
    std::map<std::uint8_t, std::uint64_t> resource_locks_; // Resource -> lock pair
    std::map<ComponentId, std::uint32_t> spent_this_tick_;
    std::vector<ViolationRecord> violations_;
    std::set<ComponentId> evicted_;

    Tick blackout_until_ = 0;

    void record_violation(Tick tick, ComponentId id, ViolationKind kind, std::string detail);
};

} // namespace sana

#endif
