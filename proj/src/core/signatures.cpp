#include "core/signatures.hpp"

#include "core/errors.hpp"

namespace sana {

IntrusionSignature SignatureRegistry::introduce(const std::string& name) {
    if (by_name_.count(name)) {
        return sigs_[by_name_.at(name)];
    }
    IntrusionSignature sig;
    sig.sig_id = static_cast<SigId>(sigs_.size());
    sig.family = sig.sig_id; // family id of an original is its own sig id
    sig.generation = 0;
    sigs_.push_back(sig);
    names_.push_back(name);
    by_name_[name] = sig.sig_id;
    return sig;
}

IntrusionSignature SignatureRegistry::mutate_of(const IntrusionSignature& parent) {
    IntrusionSignature child;
    child.sig_id = static_cast<SigId>(sigs_.size());
    child.family = parent.family;
    child.generation = parent.generation + 1;
    sigs_.push_back(child);
    names_.push_back(names_[parent.sig_id] + "'g" + std::to_string(child.generation) + "." +
                     std::to_string(child.sig_id));
    by_name_[names_.back()] = child.sig_id;
    return child;
}

IntrusionSignature SignatureRegistry::maybe_mutate(const IntrusionSignature& sig,
                                                   double mutation_rate, Rng& rng) {
    if (mutation_rate > 0.0 && rng.chance(mutation_rate)) {
        return mutate_of(sig);
    }
    return sig;
}

SigId SignatureRegistry::by_name(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) {
        throw SimError("UnknownSignature", "no signature named '" + name + "'");
    }
    return it->second;
}

std::string SignatureRegistry::family_name(FamilyId family) const {
    return names_[family]; // originals carry the family name
}

} // namespace sana
