#ifndef SANA_CORE_SCENARIO_HPP
#define SANA_CORE_SCENARIO_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/types.hpp"

namespace sana {

enum class Mode : std::uint8_t { none, baseline, sana, hybrid };

const char* to_string(Mode mode);
Mode mode_from_string(const std::string& s);

// Protocol and self-management knobs. Defaults are fixed here and pinned by
// tests; scenario files may override any of them.
struct Params {
    double security_threshold = 0.5;
    double anchor_margin = 0.1;
    std::uint32_t hysteresis_ticks = 3;
    std::uint32_t beacon_radius = 3;
    double beacon_strength = 4.0;
    std::uint32_t repair_beacon_radius = 6;
    double repair_beacon_strength = 6.0;
    double attraction_geometric = 0.5; // per-hop falloff of a beacon's pull
    double field_decay = 0.9;          // per-tick decay of node attraction
    std::uint32_t beacon_refresh = 3;
    double autonomy_epsilon = 0.1;

    double theta_d = 1.0;     // danger level needed for family-wide matching
    double danger_decay = 0.9;
    std::uint32_t warning_radius = 3;

    std::uint32_t fusion_theta = 2; // distinct alert sources per infected verdict
    std::uint32_t fusion_window = 25;

    std::uint32_t probe_period = 10;
    std::uint32_t staleness_bound = 2;

    std::uint32_t alert_hops = 4;
    std::uint32_t substance_ttl_slack = 4; // time_to_live = hops + slack

    std::uint32_t observation_period = 10; // quarantine lift delay after cleanup

    std::uint32_t release_threshold = 6; // family alerts per window for cell release
    std::uint32_t release_window = 20;

    std::uint32_t action_budget = 128; // per component per tick
    std::uint32_t expiry_grace = 10;   // near-expiry cells stop counting as cover

    std::uint32_t env_check_period = 10;
    std::uint32_t heartbeat_period = 25;

    double reweight_step = 1.0;
    std::uint32_t situation_window = 50;
};

struct CellSpec {
    std::string type;                          // matcher|fusion|prober|repair
    std::string sig;                           // matcher rule (signature name)
    std::vector<std::string> repair_families;  // repair action set
    std::uint32_t count = 0;
    double security_value = 0.5;
    std::array<Tick, 2> lifetime = {200, 400}; // inclusive range
};

struct WormConfig {
    std::string sig;
    NodeId entry = 0;
    Tick start = 0;
    std::uint32_t fanout = 1;
    double mutation_rate = 0.0;
    std::vector<NodeId> vulnerable; // empty = all nodes
};

struct OfflineConfig {
    NodeId node = 0;
    std::string sig;
    Tick at = 0;
    Tick blackout = 0;
};

struct InjectionConfig {
    Tick at = 0;
    std::string kind; // remove_cell | remove_lymph | remove_cnts
    std::uint64_t id = 0; // cell id, or host node for lymph/cnts
};

struct RuleConfig {
    std::optional<std::string> protocol;
    std::optional<std::uint16_t> port;
    std::optional<NodeId> src;
    std::optional<NodeId> dst;
    std::optional<std::string> sig; // payload predicate; honored by IDS only
    std::string action = "pass";    // drop|alert|pass
};

struct ServerAddition {
    Tick at = 0;
    std::string sig;
};

struct Scenario {
    std::string name = "unnamed";
    std::uint64_t seed = 0;
    Tick duration = 0;
    Mode mode = Mode::none;

    // topology
    std::string topo_kind = "random_tree_plus"; // or "explicit"
    std::uint32_t nodes = 0;
    std::uint32_t extra_edges = 0;
    std::uint64_t topo_seed = 0;
    std::vector<std::pair<NodeId, NodeId>> edges; // explicit topologies
    std::vector<NodeId> gateways{0};
    std::vector<NodeId> email_servers;
    std::vector<NodeId> switches;     // empty => auto: highest-degree nodes
    std::uint32_t auto_switches = 6;

    // classic stack
    std::vector<std::string> baseline_db;
    Tick update_period = 20;
    std::optional<NodeId> update_server;     // default: first gateway
    std::vector<NodeId> update_failures;     // nodes whose updaters are frozen
    std::vector<RuleConfig> policy_rules;
    std::vector<ServerAddition> server_additions;
    double av_value = 0.4;
    double fw_value = 0.3;
    double filter_value = 0.3;
    double ids_value = 0.6;

    // immune stack
    std::vector<NodeId> lymph_hosts; // empty => all network equipment
    std::vector<NodeId> cnts_hosts;  // empty => two highest-degree switches
    double cnts_rate = 0.5;
    std::vector<CellSpec> cell_catalog;
    std::map<std::string, double> type_mix; // catalog template name -> weight
    std::string placement = "uniform";      // or "at_cnts"
    bool warnings_enabled = true;
    Params params;

    // adversary
    double background_rate = 0.0;
    std::map<std::string, double> traffic_mix; // protocol -> share
    std::vector<WormConfig> worms;
    std::vector<OfflineConfig> offline;
    Tick activity_period = 4; // infected nodes touch files this often
    std::vector<InjectionConfig> injections;

    // Parses and validates; throws InvalidScenario with field diagnostics.
    static Scenario from_json_text(const std::string& text);
    static Scenario from_file(const std::string& path);
    std::string to_json_text() const;

    void validate() const;
};

} // namespace sana

#endif
