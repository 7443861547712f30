#ifndef SANA_TESTS_HELPERS_HPP
#define SANA_TESTS_HELPERS_HPP

#include <string>
#include <utility>
#include <vector>

#include "core/scenario.hpp"
#include "core/types.hpp"

namespace sana::testing {

// Bare scenario on an explicit topology; no roles, no protection, no
// adversary. Tests layer what they need on top.
inline Scenario explicit_scenario(std::uint32_t nodes,
                                  std::vector<std::pair<NodeId, NodeId>> edges,
                                  Tick duration = 50) {
    Scenario s;
    s.name = "test";
    s.topo_kind = "explicit";
    s.nodes = nodes;
    s.edges = std::move(edges);
    s.gateways = {0};
    s.auto_switches = 0;
    s.duration = duration;
    s.mode = Mode::none;
    s.activity_period = 0;
    return s;
}

inline Scenario line_scenario(std::uint32_t nodes, Tick duration = 50) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId n = 0; n + 1 < nodes; ++n) {
        edges.emplace_back(n, n + 1);
    }
    return explicit_scenario(nodes, std::move(edges), duration);
}

} // namespace sana::testing

#endif
