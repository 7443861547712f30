#ifndef SANA_CORE_SIGNATURES_HPP
#define SANA_CORE_SIGNATURES_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "core/rng.hpp"
#include "core/types.hpp"

namespace sana {

// Intrusion signature: an abstract pattern symbol. Mutation creates a fresh
// sig_id one generation deeper while keeping the family of the original, so
// exact matchers go blind but family-aware detectors still have a handle.
struct IntrusionSignature {
    SigId sig_id = kNoSig;
    FamilyId family = 0;
    std::uint32_t generation = 0;
};

class SignatureRegistry {
public:
    // Introduces a named original signature (generation 0, own family).
    IntrusionSignature introduce(const std::string& name);

    // Child of `parent`: new sig_id, same family, generation + 1.
    IntrusionSignature mutate_of(const IntrusionSignature& parent);

    // With probability `mutation_rate` returns a fresh child, else `sig`.
    IntrusionSignature maybe_mutate(const IntrusionSignature& sig, double mutation_rate,
                                    Rng& rng);

    bool known(SigId id) const { return id < sigs_.size(); }
    const IntrusionSignature& get(SigId id) const { return sigs_[id]; }
    SigId by_name(const std::string& name) const;
    const std::string& name(SigId id) const { return names_[id]; }
    FamilyId family_of(SigId id) const { return sigs_[id].family; }
    std::size_t count() const { return sigs_.size(); }

    std::string family_name(FamilyId family) const;

private:
    std::vector<IntrusionSignature> sigs_;
    std::vector<std::string> names_;
    std::map<std::string, SigId> by_name_;
};

} // namespace sana

#endif
