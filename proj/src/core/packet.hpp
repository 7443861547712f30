#ifndef SANA_CORE_PACKET_HPP
#define SANA_CORE_PACKET_HPP

#include <cstdint>
#include <vector>

#include "core/types.hpp"

namespace sana {

// Simulated datagram. payload_sigs is empty for benign traffic; worm and
// activity traffic carries intrusion signature ids.
struct Packet {
    std::uint64_t packet_id = 0;
    NodeId src = kNoNode;
    NodeId dst = kNoNode;
    Protocol protocol = Protocol::other;
    std::uint16_t port = 0;
    std::vector<SigId> payload_sigs;
    std::vector<NodeId> hop_trace;
    bool infection_attempt = false; // delivery may flip the target to infected
};

} // namespace sana

#endif
