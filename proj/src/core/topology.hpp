#ifndef SANA_CORE_TOPOLOGY_HPP
#define SANA_CORE_TOPOLOGY_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "core/rng.hpp"
#include "core/types.hpp"

namespace sana {

// Static network graph with precomputed shortest-path routing. Routing ties
// are broken toward the smallest next-hop id so forwarding is reproducible.
class Topology {
public:
    struct Spec {
        std::uint32_t node_count = 0;
        std::vector<std::pair<NodeId, NodeId>> edges;
        std::vector<NodeRole> roles; // defaults to host when empty
    };

    // Validates connectivity and edge sanity; throws DisconnectedGraph,
    // DanglingEdge or DuplicateNodeId.
    static Topology build(const Spec& spec);

    // Random spanning tree over `nodes` plus `extra_edges` distinct
    // additional edges, drawn from `rng`. Always connected by construction.
    static Spec random_tree_plus(std::uint32_t nodes, std::uint32_t extra_edges, Rng& rng);

    std::uint32_t node_count() const { return node_count_; }
    std::size_t edge_count() const { return edge_count_; }

    const std::vector<NodeId>& neighbors(NodeId n) const { return adjacency_[n]; }
    NodeRole role(NodeId n) const { return roles_[n]; }
    bool is_network_equipment(NodeId n) const;

    // Hop distance along shortest paths; nodes are always mutually reachable.
    std::uint32_t distance(NodeId from, NodeId to) const { return dist_[from][to]; }

    // Next hop on the lexicographically-tie-broken shortest path.
    NodeId next_hop(NodeId from, NodeId to) const { return next_hop_[from][to]; }

    std::vector<NodeId> path(NodeId from, NodeId to) const;

    std::vector<NodeId> nodes_with_role(NodeRole role) const;

private:
    std::uint32_t node_count_ = 0;
    std::size_t edge_count_ = 0;
    std::vector<std::vector<NodeId>> adjacency_; // sorted per node
    std::vector<NodeRole> roles_;
    std::vector<std::vector<std::uint32_t>> dist_;
    std::vector<std::vector<NodeId>> next_hop_;

    void compute_routes();
};

} // namespace sana

#endif
