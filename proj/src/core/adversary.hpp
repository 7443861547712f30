#ifndef SANA_CORE_ADVERSARY_HPP
#define SANA_CORE_ADVERSARY_HPP

#include <map>
#include <string>
#include <vector>

#include "core/packet.hpp"
#include "core/rng.hpp"
#include "core/scenario.hpp"
#include "core/signatures.hpp"
#include "core/topology.hpp"
#include "core/types.hpp"

namespace sana {

enum class InfectionStatus : std::uint8_t { clean, infected };

// Per-node infection bookkeeping. Quarantine is tracked alongside because
// isolation changes what traffic a node may exchange.
struct InfectionState {
    std::vector<InfectionStatus> status;
    std::vector<Tick> infected_at;
    std::vector<SigId> infecting_sig;
    std::vector<bool> quarantined;

    void reset(std::uint32_t nodes) {
        status.assign(nodes, InfectionStatus::clean);
        infected_at.assign(nodes, kNoTick);
        infecting_sig.assign(nodes, kNoSig);
        quarantined.assign(nodes, false);
    }

    bool infected(NodeId n) const { return status[n] == InfectionStatus::infected; }

    std::uint32_t infected_count() const {
        std::uint32_t c = 0;
        for (auto s : status) {
            c += s == InfectionStatus::infected ? 1 : 0;
        }
        return c;
    }

    std::uint32_t quarantined_count() const {
        std::uint32_t c = 0;
        for (bool q : quarantined) {
            c += q ? 1 : 0;
        }
        return c;
    }
};

std::uint16_t default_port(Protocol proto);

// Background traffic, worm propagation, signature mutation and offline
// infection. All stochastic draws consume the adversary stream in a fixed
// order: background first, then worms in configuration order, each iterating
// infected nodes ascending.
class Adversary {
public:
    Adversary(const Scenario& scenario, const Topology& topo, SignatureRegistry& registry);

    // `rate` benign packets between uniformly drawn distinct src/dst pairs.
    std::vector<Packet> background_tick(Rng& rng, std::uint64_t& packet_seq);

    // Seed packets for pending worms plus fanout infection attempts from
    // every infected, non-quarantined node. Each attempt may mutate.
    std::vector<Packet> worm_tick(Rng& rng, Tick now, const InfectionState& state,
                                  std::uint64_t& packet_seq);

    // Nodes whose infection should touch files this tick (detection bait).
    std::vector<std::pair<NodeId, SigId>> activity_tick(Tick now, const InfectionState& state,
                                                        const std::vector<Tick>& blackout_until) const;

    // Offline infections scheduled at `now`, if any.
    std::vector<OfflineConfig> offline_due(Tick now) const;

    bool vulnerable(FamilyId family, NodeId node) const;
    SigId worm_sig(std::size_t worm_index) const { return worms_[worm_index].base.sig_id; }
    std::size_t worm_count() const { return worms_.size(); }
    SigId offline_sig(std::size_t i) const { return offline_sigs_[i]; }

    const std::vector<std::string>& benign_names() const { return benign_names_; }

private:
    struct WormRuntime {
        WormConfig cfg;
        IntrusionSignature base;
        bool entered = false;
        std::vector<NodeId> targets;       // vulnerability set as a list
        std::vector<bool> vulnerable_mask; // per node
    };

    const Scenario& scenario_;
    const Topology& topo_;
    SignatureRegistry& registry_;
    std::vector<WormRuntime> worms_;
    std::vector<SigId> offline_sigs_;
    std::vector<SigId> benign_sigs_;
    std::vector<std::string> benign_names_;
    std::vector<Protocol> mix_protocols_;
    std::vector<double> mix_weights_;
};

} // namespace sana

#endif
