#include "core/receptors.hpp"

namespace sana {

ReceptorRegistry::Pair ReceptorRegistry::mint(const std::string& entity_type,
                                              const std::string& status_tag) {
    const std::uint64_t id = next_pair_++;
    descriptors_[id] = ReceptorDescriptor{entity_type, status_tag};
    return Pair{ReceptorLock{id}, ReceptorKey{id}};
}

void ReceptorRegistry::grant(ReceptorKey key, ComponentId holder) {
    grants_[key.pair].insert(holder);
}

bool ReceptorRegistry::granted(ReceptorKey key, ComponentId holder) const {
    auto it = grants_.find(key.pair);
    return it != grants_.end() && it->second.count(holder) != 0;
}

bool ReceptorRegistry::authenticate(ComponentId holder,
                                    const std::vector<ReceptorKey>& keys) const {
    for (const auto& key : keys) {
        if (!minted(key) || !granted(key, holder)) {
            return false;
        }
    }
    return true;
}

} // namespace sana
