#ifndef SANA_CORE_TYPES_HPP
#define SANA_CORE_TYPES_HPP

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace sana {

using NodeId = std::uint32_t;
using Tick = std::uint64_t;
using ComponentId = std::uint64_t;
using CellId = std::uint64_t;
using SubstanceId = std::uint64_t;
using SigId = std::uint32_t;
using FamilyId = std::uint32_t;

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();
inline constexpr Tick kNoTick = std::numeric_limits<Tick>::max();
inline constexpr SigId kNoSig = std::numeric_limits<SigId>::max();

enum class NodeRole : std::uint8_t {
    host,
    switch_,
    router,
    gateway,
    email_server,
    lymph_node_host,
    cnts_host,
};

const char* to_string(NodeRole role);

enum class Protocol : std::uint8_t { http, smtp, dns, ssh, ftp, irc, other };

const char* to_string(Protocol proto);
Protocol protocol_from_string(const std::string& name);

} // namespace sana

#endif
