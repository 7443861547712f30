#include "core/substances.hpp"

namespace sana {

const char* to_string(MessageType type) {
    switch (type) {
    case MessageType::warning: return "warning";
    case MessageType::alert: return "alert";
    case MessageType::quarantine_request: return "quarantine_request";
    case MessageType::status_report: return "status_report";
    case MessageType::attraction_beacon: return "attraction_beacon";
    case MessageType::death_record: return "death_record";
    case MessageType::cell_release: return "cell_release";
    }
    return "?";
}

const char* to_string(AlertKind kind) {
    switch (kind) {
    case AlertKind::sig_exact: return "sig_exact";
    case AlertKind::sig_family: return "sig_family";
    case AlertKind::silent: return "silent";
    case AlertKind::stale: return "stale";
    case AlertKind::eviction: return "eviction";
    }
    return "?";
}

void SubstanceFabric::reset(std::uint32_t node_count) {
    processed_.assign(node_count, {});
    forward_sets_.assign(node_count, {});
}

bool can_read(const SubstanceBody& body, const std::vector<ReceptorKey>& keys) {
    for (const auto& lock : body.locks) {
        for (const auto& key : keys) {
            if (ReceptorRegistry::match(lock, key)) {
                return true;
            }
        }
    }
    return false;
}

} // namespace sana
