#include "core/adversary.hpp"

namespace sana {

std::uint16_t default_port(Protocol proto) {
    switch (proto) {
    case Protocol::http: return 80;
    case Protocol::smtp: return 25;
    case Protocol::dns: return 53;
    case Protocol::ssh: return 22;
    case Protocol::ftp: return 21;
    case Protocol::irc: return 6667;
    case Protocol::other: return 9999;
    }
    return 0;
}

Adversary::Adversary(const Scenario& scenario, const Topology& topo,
                     SignatureRegistry& registry)
    : scenario_(scenario), topo_(topo), registry_(registry) {
    for (const auto& cfg : scenario.worms) {
        WormRuntime worm;
        worm.cfg = cfg;
        worm.base = registry.introduce(cfg.sig);
        if (cfg.vulnerable.empty()) {
            worm.targets.resize(topo.node_count());
            for (NodeId n = 0; n < topo.node_count(); ++n) worm.targets[n] = n;
            worm.vulnerable_mask.assign(topo.node_count(), true);
        } else {
            worm.targets = cfg.vulnerable;
            worm.vulnerable_mask.assign(topo.node_count(), false);
            for (NodeId n : cfg.vulnerable) worm.vulnerable_mask[n] = true;
        }
        worms_.push_back(std::move(worm));
    }
    for (const auto& off : scenario.offline) {
        offline_sigs_.push_back(registry.introduce(off.sig).sig_id);
    }
    // a small benign alphabet so background payloads are not always empty
    for (int i = 0; i < 4; ++i) {
        std::string name = "B" + std::to_string(i);
        benign_sigs_.push_back(registry.introduce(name).sig_id);
        benign_names_.push_back(name);
    }
    if (scenario.traffic_mix.empty()) {
        mix_protocols_ = {Protocol::http};
        mix_weights_ = {1.0};
    } else {
        for (const auto& [name, share] : scenario.traffic_mix) {
            mix_protocols_.push_back(protocol_from_string(name));
            mix_weights_.push_back(share);
        }
    }
}

std::vector<Packet> Adversary::background_tick(Rng& rng, std::uint64_t& packet_seq) {
    std::vector<Packet> out;
    const auto n = topo_.node_count();
    const auto count = static_cast<std::uint64_t>(scenario_.background_rate);
    if (n < 2) return out;
    for (std::uint64_t i = 0; i < count; ++i) {
        Packet p;
        p.packet_id = packet_seq++;
        p.src = static_cast<NodeId>(rng.below(n));
        auto other = static_cast<NodeId>(rng.below(n - 1));
        p.dst = other >= p.src ? other + 1 : other; // distinct uniform pair
        p.protocol = mix_protocols_[rng.weighted(mix_weights_)];
        p.port = default_port(p.protocol);
        if (rng.chance(0.15)) {
            p.payload_sigs.push_back(benign_sigs_[rng.below(benign_sigs_.size())]);
        }
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<Packet> Adversary::worm_tick(Rng& rng, Tick now, const InfectionState& state,
                                         std::uint64_t& packet_seq) {
    std::vector<Packet> out;
    for (auto& worm : worms_) {
        if (now < worm.cfg.start) continue;
        if (!worm.entered) {
            for (NodeId n = 0; n < topo_.node_count(); ++n) {
                const SigId sig = state.infecting_sig[n];
                if (state.infected(n) && sig != kNoSig &&
                    registry_.family_of(sig) == worm.base.family) {
                    worm.entered = true;
                    break;
                }
            }
        }
        if (!worm.entered) {
            // entry stays pending: one seed attempt per tick until it lands
            Packet seed;
            seed.packet_id = packet_seq++;
            seed.src = worm.cfg.entry;
            seed.dst = worm.cfg.entry;
            seed.protocol = Protocol::http;
            seed.port = default_port(seed.protocol);
            seed.payload_sigs.push_back(worm.base.sig_id);
            seed.infection_attempt = true;
            out.push_back(std::move(seed));
            continue;
        }
        for (NodeId n = 0; n < topo_.node_count(); ++n) {
            if (!state.infected(n) || state.quarantined[n]) continue;
            const SigId carried = state.infecting_sig[n];
            if (carried == kNoSig ||
                registry_.family_of(carried) != worm.base.family) {
                continue; // this node hosts a different infection
            }
            for (std::uint32_t k = 0; k < worm.cfg.fanout; ++k) {
                const NodeId target = worm.targets[rng.below(worm.targets.size())];
                IntrusionSignature sig =
                    registry_.maybe_mutate(registry_.get(carried), worm.cfg.mutation_rate, rng);
                if (target == n) continue; // self-draw wastes the attempt
                Packet p;
                p.packet_id = packet_seq++;
                p.src = n;
                p.dst = target;
                p.protocol = Protocol::http;
                p.port = default_port(p.protocol);
                p.payload_sigs.push_back(sig.sig_id);
                p.infection_attempt = true;
                out.push_back(std::move(p));
            }
        }
    }
    return out;
}

std::vector<std::pair<NodeId, SigId>> Adversary::activity_tick(
    Tick now, const InfectionState& state, const std::vector<Tick>& blackout_until) const {
    std::vector<std::pair<NodeId, SigId>> out;
    if (scenario_.activity_period == 0) return out;
    for (NodeId n = 0; n < state.status.size(); ++n) {
        if (!state.infected(n)) continue;
        if (now < blackout_until[n]) continue; // protection can't see anything anyway
        const Tick since = state.infected_at[n];
        if (now > since && (now - since) % scenario_.activity_period == 0) {
            out.emplace_back(n, state.infecting_sig[n]);
        }
    }
    return out;
}

std::vector<OfflineConfig> Adversary::offline_due(Tick now) const {
    std::vector<OfflineConfig> due;
    for (const auto& off : scenario_.offline) {
        if (off.at == now) due.push_back(off);
    }
    return due;
}

bool Adversary::vulnerable(FamilyId family, NodeId node) const {
    for (const auto& worm : worms_) {
        if (worm.base.family == family) {
            return worm.vulnerable_mask[node];
        }
    }
    return false;
}

} // namespace sana
