#include "core/topology.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <string>

#include "core/errors.hpp"

namespace sana {

const char* to_string(NodeRole role) {
    switch (role) {
    case NodeRole::host: return "host";
    case NodeRole::switch_: return "switch";
    case NodeRole::router: return "router";
    case NodeRole::gateway: return "gateway";
    case NodeRole::email_server: return "email_server";
    case NodeRole::lymph_node_host: return "lymph_node_host";
    case NodeRole::cnts_host: return "cnts_host";
    }
    return "?";
}

const char* to_string(Protocol proto) {
    switch (proto) {
    case Protocol::http: return "http";
    case Protocol::smtp: return "smtp";
    case Protocol::dns: return "dns";
    case Protocol::ssh: return "ssh";
    case Protocol::ftp: return "ftp";
    case Protocol::irc: return "irc";
    case Protocol::other: return "other";
    }
    return "?";
}

Protocol protocol_from_string(const std::string& name) {
    if (name == "http") return Protocol::http;
    if (name == "smtp") return Protocol::smtp;
    if (name == "dns") return Protocol::dns;
    if (name == "ssh") return Protocol::ssh;
    if (name == "ftp") return Protocol::ftp;
    if (name == "irc") return Protocol::irc;
    return Protocol::other;
}

Topology Topology::build(const Spec& spec) {
    if (spec.node_count == 0) {
        throw DisconnectedGraph("empty node set");
    }
    Topology t;
    t.node_count_ = spec.node_count;
    t.adjacency_.assign(spec.node_count, {});
    t.roles_ = spec.roles;
    if (t.roles_.empty()) {
        t.roles_.assign(spec.node_count, NodeRole::host);
    }
    if (t.roles_.size() != spec.node_count) {
        throw DuplicateNodeId("role map size does not match node count");
    }

    std::set<std::pair<NodeId, NodeId>> seen;
    for (auto [a, b] : spec.edges) {
        if (a >= spec.node_count || b >= spec.node_count) {
            throw DanglingEdge("edge endpoint " + std::to_string(std::max(a, b)) +
                               " is not a node");
        }
        if (a == b) {
            throw DanglingEdge("self loop at node " + std::to_string(a));
        }
        auto key = std::minmax(a, b);
        if (!seen.insert(key).second) {
            continue; // ignore duplicate edge
        }
        t.adjacency_[a].push_back(b);
        t.adjacency_[b].push_back(a);
    }
    t.edge_count_ = seen.size();
    for (auto& adj : t.adjacency_) {
        std::sort(adj.begin(), adj.end());
    }

    // connectivity check
    std::vector<bool> visited(spec.node_count, false);
    std::deque<NodeId> frontier{0};
    visited[0] = true;
    std::uint32_t reached = 1;
    while (!frontier.empty()) {
        NodeId n = frontier.front();
        frontier.pop_front();
        for (NodeId m : t.adjacency_[n]) {
            if (!visited[m]) {
                visited[m] = true;
                ++reached;
                frontier.push_back(m);
            }
        }
    }
    if (reached != spec.node_count) {
        throw DisconnectedGraph(std::to_string(spec.node_count - reached) +
                                " node(s) unreachable from node 0");
    }

    t.compute_routes();
    return t;
}

Topology::Spec Topology::random_tree_plus(std::uint32_t nodes, std::uint32_t extra_edges,
                                          Rng& rng) {
    Spec spec;
    spec.node_count = nodes;
    std::set<std::pair<NodeId, NodeId>> used;
    // random attachment tree: node i links to a uniformly drawn earlier node
    for (NodeId i = 1; i < nodes; ++i) {
        auto parent = static_cast<NodeId>(rng.below(i));
        spec.edges.emplace_back(parent, i);
        used.insert(std::minmax(parent, i));
    }
    std::uint32_t added = 0;
    while (added < extra_edges) {
        auto a = static_cast<NodeId>(rng.below(nodes));
        auto b = static_cast<NodeId>(rng.below(nodes));
        if (a == b) {
            continue;
        }
        if (used.insert(std::minmax(a, b)).second) {
            spec.edges.emplace_back(std::min(a, b), std::max(a, b));
            ++added;
        }
    }
    return spec;
}

bool Topology::is_network_equipment(NodeId n) const {
    NodeRole r = roles_[n];
    return r == NodeRole::switch_ || r == NodeRole::router || r == NodeRole::gateway;
}

void Topology::compute_routes() {
    dist_.assign(node_count_, std::vector<std::uint32_t>(node_count_, UINT32_MAX));
    next_hop_.assign(node_count_, std::vector<NodeId>(node_count_, kNoNode));

    // BFS from every destination; among equal-length paths the recorded
    // parent is the smallest-id neighbor, giving lexicographic tie-breaks.
    std::vector<std::uint32_t> dist;
    std::vector<NodeId> toward;
    for (NodeId dst = 0; dst < node_count_; ++dst) {
        dist.assign(node_count_, UINT32_MAX);
        toward.assign(node_count_, kNoNode);
        dist[dst] = 0;
        std::deque<NodeId> frontier{dst};
        while (!frontier.empty()) {
            NodeId n = frontier.front();
            frontier.pop_front();
            for (NodeId m : adjacency_[n]) {
                if (dist[m] == UINT32_MAX) {
                    dist[m] = dist[n] + 1;
                    toward[m] = n;
                    frontier.push_back(m);
                } else if (dist[m] == dist[n] + 1 && n < toward[m]) {
                    toward[m] = n;
                }
            }
        }
        for (NodeId src = 0; src < node_count_; ++src) {
            dist_[src][dst] = dist[src];
            next_hop_[src][dst] = src == dst ? src : toward[src];
        }
    }
}

std::vector<NodeId> Topology::path(NodeId from, NodeId to) const {
    std::vector<NodeId> p{from};
    NodeId cur = from;
    while (cur != to) {
        cur = next_hop_[cur][to];
        p.push_back(cur);
    }
    return p;
}

std::vector<NodeId> Topology::nodes_with_role(NodeRole role) const {
    std::vector<NodeId> out;
    for (NodeId n = 0; n < node_count_; ++n) {
        if (roles_[n] == role) {
            out.push_back(n);
        }
    }
    return out;
}

} // namespace sana
