#include "core/secenv.hpp"

#include <algorithm>

#include "core/errors.hpp"

namespace sana {

const char* to_string(Verdict verdict) {
    switch (verdict) {
    case Verdict::pass: return "pass";
    case Verdict::alert: return "alert";
    case Verdict::drop: return "drop";
    case Verdict::consume: return "consume";
    }
    return "?";
}

const char* to_string(ComponentKind kind) {
    switch (kind) {
    case ComponentKind::antivirus: return "antivirus";
    case ComponentKind::firewall: return "firewall";
    case ComponentKind::packet_filter: return "packet_filter";
    case ComponentKind::ids: return "ids";
    case ComponentKind::artificial_cell: return "artificial_cell";
    case ComponentKind::lymph_node: return "lymph_node";
    case ComponentKind::cnts: return "cnts";
    }
    return "?";
}

const char* to_string(ViolationKind kind) {
    switch (kind) {
    case ViolationKind::unauthorized_resource: return "unauthorized_resource";
    case ViolationKind::failed_authentication: return "failed_authentication";
    case ViolationKind::budget_exceeded: return "budget_exceeded";
    }
    return "?";
}

const char* to_string(Resource res) {
    switch (res) {
    case Resource::storage: return "storage";
    case Resource::memory: return "memory";
    case Resource::cpu: return "cpu";
    case Resource::network: return "network";
    }
    return "?";
}

const char* to_string(EnvEventKind kind) {
    switch (kind) {
    case EnvEventKind::packet: return "packet_arrival";
    case EnvEventKind::file_access: return "file_access";
    case EnvEventKind::substance: return "substance_arrival";
    }
    return "?";
}

bool DispatchContext::claim_check(const Component& who, const std::string& key) {
    const bool duplicate = !claimed_.insert(key).second;
    if (duplicate && coordinated_) {
        return false; // work already done at this node for this event
    }
    check_log_.emplace_back(who.label(), key);
    ++performed_;
    if (duplicate) {
        ++redundant_; // uncoordinated components repeat the work
    }
    return true;
}

void SecurityEnvironment::register_component(std::unique_ptr<Component> component,
                                             const std::set<EnvEventKind>& events) {
    if (registered(component->id())) {
        throw DuplicateRegistration("component " + component->label() + " already at node " +
                                    std::to_string(node_));
    }
    const ComponentId id = component->id();
    registry_.push_back(std::move(component));
    for (EnvEventKind kind : events) {
        subscriptions_[kind].push_back(id);
    }
}

std::unique_ptr<Component> SecurityEnvironment::withdraw(ComponentId id) {
    for (auto& [kind, list] : subscriptions_) {
        list.erase(std::remove(list.begin(), list.end(), id), list.end());
    }
    for (auto it = registry_.begin(); it != registry_.end(); ++it) {
        if ((*it)->id() == id) {
            auto out = std::move(*it);
            registry_.erase(it);
            return out;
        }
    }
    return nullptr;
}

bool SecurityEnvironment::registered(ComponentId id) const {
    return std::any_of(registry_.begin(), registry_.end(),
                       [id](const auto& c) { return c->id() == id; });
}

Component* SecurityEnvironment::find(ComponentId id) {
    for (auto& c : registry_) {
        if (c->id() == id) return c.get();
    }
    return nullptr;
}

const Component* SecurityEnvironment::find(ComponentId id) const {
    for (const auto& c : registry_) {
        if (c->id() == id) return c.get();
    }
    return nullptr;
}

std::vector<Component*> SecurityEnvironment::subscribers(EnvEventKind kind) {
    std::vector<Component*> out;
    auto it = subscriptions_.find(kind);
    if (it == subscriptions_.end()) return out;
    for (ComponentId id : it->second) {
        Component* c = find(id);
        if (c && c->active()) {
            out.push_back(c);
        }
    }
    return out;
}

std::vector<Component*> SecurityEnvironment::all_components() {
    std::vector<Component*> out;
    out.reserve(registry_.size());
    for (auto& c : registry_) out.push_back(c.get());
    return out;
}

std::vector<const Component*> SecurityEnvironment::all_components() const {
    std::vector<const Component*> out;
    out.reserve(registry_.size());
    for (const auto& c : registry_) out.push_back(c.get());
    return out;
}

void SecurityEnvironment::set_resource_lock(Resource res, ReceptorLock lock) {
    resource_locks_[static_cast<std::uint8_t>(res)] = lock.pair;
}

bool SecurityEnvironment::access_resource(Tick tick, ComponentId id, Resource res) {
    Component* c = find(id);
    if (!c) return false;
    auto it = resource_locks_.find(static_cast<std::uint8_t>(res));
    if (it == resource_locks_.end()) {
        return true; // unguarded resource kind
    }
    for (const auto& key : c->keys()) {
        if (key.pair == it->second) {
            return true;
        }
    }
    record_violation(tick, id, ViolationKind::unauthorized_resource,
                     std::string("resource ") + to_string(res));
    return false;
}

bool SecurityEnvironment::spend_action(Tick tick, ComponentId id, std::uint32_t amount,
                                       std::uint32_t budget) {
    auto& spent = spent_this_tick_[id];
    spent += amount;
    if (spent > budget) {
        record_violation(tick, id, ViolationKind::budget_exceeded,
                         std::to_string(spent) + "/" + std::to_string(budget));
        return false;
    }
    return true;
}

void SecurityEnvironment::reset_budgets() {
    spent_this_tick_.clear();
}

bool SecurityEnvironment::check_component(Tick tick, const Component& component) {
    if (!receptors_->authenticate(component.id(), component.keys())) {
        record_violation(tick, component.id(), ViolationKind::failed_authentication,
                         "receptor keys not granted to holder");
        return false;
    }
    return !has_violation(component.id());
}

bool SecurityEnvironment::has_violation(ComponentId id) const {
    return std::any_of(violations_.begin(), violations_.end(),
                       [id](const ViolationRecord& v) { return v.component == id; });
}

std::string SecurityEnvironment::evict(Tick tick, ComponentId id) {
    if (!has_violation(id)) {
        throw NoViolationOnRecord("component " + std::to_string(id) + " at node " +
                                  std::to_string(node_));
    }
    std::string detail = "no detail";
    for (const auto& v : violations_) {
        if (v.component == id) {
            detail = std::string(to_string(v.kind)) + " " + v.detail;
            break;
        }
    }
    if (Component* c = find(id)) {
        c->set_active(false);
    }
    auto removed = withdraw(id); // drops subscriptions and ownership
    (void)removed;
    (void)tick;
    evicted_.insert(id);
    return detail;
}

void SecurityEnvironment::record_violation(Tick tick, ComponentId id, ViolationKind kind,
                                           std::string detail) {
    violations_.push_back(ViolationRecord{tick, id, kind, std::move(detail)});
}

} // namespace sana
