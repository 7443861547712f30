#ifndef SANA_CORE_RECEPTORS_HPP
#define SANA_CORE_RECEPTORS_HPP

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "core/types.hpp"

namespace sana {

// Lock/key capability pair. A key opens exactly the lock it was minted
// with; within the simulation only the registry can create pairs, which is
// what makes keys unforgeable.
struct ReceptorLock {
    std::uint64_t pair = 0;
};

struct ReceptorKey {
    std::uint64_t pair = 0;
};

struct ReceptorDescriptor {
    std::string entity_type;
    std::string status_tag;
};

class ReceptorRegistry {
public:
    struct Pair {
        ReceptorLock lock;
        ReceptorKey key;
    };

    Pair mint(const std::string& entity_type, const std::string& status_tag);

    bool minted(ReceptorLock lock) const { return descriptors_.count(lock.pair) != 0; }
    bool minted(ReceptorKey key) const { return descriptors_.count(key.pair) != 0; }

    static bool match(ReceptorLock lock, ReceptorKey key) {
        return lock.pair != 0 && lock.pair == key.pair;
    }

    const ReceptorDescriptor& descriptor(std::uint64_t pair) const {
        return descriptors_.at(pair);
    }

    // Grant bookkeeping: which component ids legitimately hold a key.
    void grant(ReceptorKey key, ComponentId holder);
    bool granted(ReceptorKey key, ComponentId holder) const;

    // True iff every key the component presents was minted here and granted
    // to it. A stolen or fabricated key fails this check.
    bool authenticate(ComponentId holder, const std::vector<ReceptorKey>& keys) const;

private:
    std::uint64_t next_pair_ = 1;
    std::map<std::uint64_t, ReceptorDescriptor> descriptors_;
    std::map<std::uint64_t, std::set<ComponentId>> grants_;
};

} // namespace sana

#endif
