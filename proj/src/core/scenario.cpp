#include "core/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "core/errors.hpp"

namespace sana {

using nlohmann::json;

const char* to_string(Mode mode) {
    switch (mode) {
    case Mode::none: return "none";
    case Mode::baseline: return "baseline";
    case Mode::sana: return "sana";
    case Mode::hybrid: return "hybrid";
    }
    return "?";
}

Mode mode_from_string(const std::string& s) {
    if (s == "none") return Mode::none;
    if (s == "baseline") return Mode::baseline;
    if (s == "sana") return Mode::sana;
    if (s == "hybrid") return Mode::hybrid;
    throw InvalidScenario("mode", "unknown mode '" + s + "'");
}

namespace {

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw InvalidScenario(key, "wrong type");
    }
}

std::vector<NodeId> node_list(const json& j, const char* key) {
    std::vector<NodeId> out;
    if (!j.contains(key)) return out;
    for (const auto& v : j.at(key)) {
        out.push_back(v.get<NodeId>());
    }
    return out;
}

void parse_params(const json& j, Params& p) {
    p.security_threshold = get_or(j, "security_threshold", p.security_threshold);
    p.anchor_margin = get_or(j, "anchor_margin", p.anchor_margin);
    p.hysteresis_ticks = get_or(j, "hysteresis_ticks", p.hysteresis_ticks);
    p.beacon_radius = get_or(j, "beacon_radius", p.beacon_radius);
    p.beacon_strength = get_or(j, "beacon_strength", p.beacon_strength);
    p.repair_beacon_radius = get_or(j, "repair_beacon_radius", p.repair_beacon_radius);
    p.repair_beacon_strength = get_or(j, "repair_beacon_strength", p.repair_beacon_strength);
    p.attraction_geometric = get_or(j, "attraction_geometric", p.attraction_geometric);
    p.field_decay = get_or(j, "field_decay", p.field_decay);
    p.beacon_refresh = get_or(j, "beacon_refresh", p.beacon_refresh);
    p.autonomy_epsilon = get_or(j, "autonomy_epsilon", p.autonomy_epsilon);
    p.theta_d = get_or(j, "theta_d", p.theta_d);
    p.danger_decay = get_or(j, "danger_decay", p.danger_decay);
    p.warning_radius = get_or(j, "warning_radius", p.warning_radius);
    p.fusion_theta = get_or(j, "fusion_theta", p.fusion_theta);
    p.fusion_window = get_or(j, "fusion_window", p.fusion_window);
    p.probe_period = get_or(j, "probe_period", p.probe_period);
    p.staleness_bound = get_or(j, "staleness_bound", p.staleness_bound);
    p.alert_hops = get_or(j, "alert_hops", p.alert_hops);
    p.substance_ttl_slack = get_or(j, "substance_ttl_slack", p.substance_ttl_slack);
    p.observation_period = get_or(j, "observation_period", p.observation_period);
    p.release_threshold = get_or(j, "release_threshold", p.release_threshold);
    p.release_window = get_or(j, "release_window", p.release_window);
    p.action_budget = get_or(j, "action_budget", p.action_budget);
    p.expiry_grace = get_or(j, "expiry_grace", p.expiry_grace);
    p.env_check_period = get_or(j, "env_check_period", p.env_check_period);
    p.heartbeat_period = get_or(j, "heartbeat_period", p.heartbeat_period);
    p.reweight_step = get_or(j, "reweight_step", p.reweight_step);
    p.situation_window = get_or(j, "situation_window", p.situation_window);
}

json params_json(const Params& p) {
    return json{{"security_threshold", p.security_threshold},
                {"anchor_margin", p.anchor_margin},
                {"hysteresis_ticks", p.hysteresis_ticks},
                {"beacon_radius", p.beacon_radius},
                {"beacon_strength", p.beacon_strength},
                {"repair_beacon_radius", p.repair_beacon_radius},
                {"repair_beacon_strength", p.repair_beacon_strength},
                {"attraction_geometric", p.attraction_geometric},
                {"field_decay", p.field_decay},
                {"beacon_refresh", p.beacon_refresh},
                {"autonomy_epsilon", p.autonomy_epsilon},
                {"theta_d", p.theta_d},
                {"danger_decay", p.danger_decay},
                {"warning_radius", p.warning_radius},
                {"fusion_theta", p.fusion_theta},
                {"fusion_window", p.fusion_window},
                {"probe_period", p.probe_period},
                {"staleness_bound", p.staleness_bound},
                {"alert_hops", p.alert_hops},
                {"substance_ttl_slack", p.substance_ttl_slack},
                {"observation_period", p.observation_period},
                {"release_threshold", p.release_threshold},
                {"release_window", p.release_window},
                {"action_budget", p.action_budget},
                {"expiry_grace", p.expiry_grace},
                {"env_check_period", p.env_check_period},
                {"heartbeat_period", p.heartbeat_period},
                {"reweight_step", p.reweight_step},
                {"situation_window", p.situation_window}};
}

} // namespace

Scenario Scenario::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InvalidScenario("<root>", std::string("not valid JSON: ") + e.what());
    }

    Scenario s;
    s.name = get_or<std::string>(j, "name", s.name);
    s.seed = get_or<std::uint64_t>(j, "seed", 0);
    s.duration = get_or<Tick>(j, "duration", 0);
    s.mode = mode_from_string(get_or<std::string>(j, "mode", "none"));

    if (!j.contains("topology")) {
        throw InvalidScenario("topology", "missing");
    }
    const json& topo = j.at("topology");
    s.topo_kind = get_or<std::string>(topo, "kind", "random_tree_plus");
    s.nodes = get_or<std::uint32_t>(topo, "nodes", 0);
    s.extra_edges = get_or<std::uint32_t>(topo, "extra_edges", 0);
    s.topo_seed = get_or<std::uint64_t>(topo, "topo_seed", 0);
    if (topo.contains("edges")) {
        for (const auto& e : topo.at("edges")) {
            if (!e.is_array() || e.size() != 2) {
                throw InvalidScenario("topology.edges", "each edge must be a [a,b] pair");
            }
            s.edges.emplace_back(e[0].get<NodeId>(), e[1].get<NodeId>());
        }
    }
    if (topo.contains("gateways")) s.gateways = node_list(topo, "gateways");
    s.email_servers = node_list(topo, "email_servers");
    s.switches = node_list(topo, "switches");
    s.auto_switches = get_or<std::uint32_t>(topo, "auto_switches", s.auto_switches);

    if (j.contains("classic")) {
        const json& c = j.at("classic");
        if (c.contains("signature_db")) {
            for (const auto& v : c.at("signature_db")) s.baseline_db.push_back(v.get<std::string>());
        }
        s.update_period = get_or<Tick>(c, "update_period", s.update_period);
        if (c.contains("update_server")) s.update_server = c.at("update_server").get<NodeId>();
        s.update_failures = node_list(c, "update_failures");
        if (c.contains("policy_rules")) {
            for (const auto& r : c.at("policy_rules")) {
                RuleConfig rule;
                if (r.contains("protocol")) rule.protocol = r.at("protocol").get<std::string>();
                if (r.contains("port")) rule.port = r.at("port").get<std::uint16_t>();
                if (r.contains("src")) rule.src = r.at("src").get<NodeId>();
                if (r.contains("dst")) rule.dst = r.at("dst").get<NodeId>();
                if (r.contains("sig")) rule.sig = r.at("sig").get<std::string>();
                rule.action = get_or<std::string>(r, "action", "pass");
                if (rule.action != "drop" && rule.action != "alert" && rule.action != "pass") {
                    throw InvalidScenario("classic.policy_rules.action",
                                          "must be drop|alert|pass, got '" + rule.action + "'");
                }
                s.policy_rules.push_back(std::move(rule));
            }
        }
        if (c.contains("server_additions")) {
            for (const auto& a : c.at("server_additions")) {
                s.server_additions.push_back(
                    ServerAddition{a.at("at").get<Tick>(), a.at("sig").get<std::string>()});
            }
        }
        s.av_value = get_or(c, "av_value", s.av_value);
        s.fw_value = get_or(c, "fw_value", s.fw_value);
        s.filter_value = get_or(c, "filter_value", s.filter_value);
        s.ids_value = get_or(c, "ids_value", s.ids_value);
    }

    if (j.contains("immune")) {
        const json& m = j.at("immune");
        s.lymph_hosts = node_list(m, "lymph_hosts");
        s.cnts_hosts = node_list(m, "cnts_hosts");
        s.cnts_rate = get_or(m, "cnts_rate", s.cnts_rate);
        s.placement = get_or<std::string>(m, "placement", s.placement);
        s.warnings_enabled = get_or(m, "warnings_enabled", s.warnings_enabled);
        if (m.contains("cells")) {
            for (const auto& c : m.at("cells")) {
                CellSpec spec;
                spec.type = c.at("type").get<std::string>();
                spec.sig = get_or<std::string>(c, "sig", "");
                if (c.contains("repair_families")) {
                    for (const auto& f : c.at("repair_families"))
                        spec.repair_families.push_back(f.get<std::string>());
                }
                spec.count = get_or<std::uint32_t>(c, "count", 0);
                spec.security_value = get_or(c, "security_value", spec.security_value);
                if (c.contains("lifetime")) {
                    const auto& lt = c.at("lifetime");
                    if (!lt.is_array() || lt.size() != 2) {
                        throw InvalidScenario("immune.cells.lifetime", "must be [min,max]");
                    }
                    spec.lifetime = {lt[0].get<Tick>(), lt[1].get<Tick>()};
                }
                s.cell_catalog.push_back(std::move(spec));
            }
        }
        if (m.contains("type_mix")) {
            for (auto it = m.at("type_mix").begin(); it != m.at("type_mix").end(); ++it) {
                s.type_mix[it.key()] = it.value().get<double>();
            }
        }
        if (m.contains("params")) parse_params(m.at("params"), s.params);
    }

    if (j.contains("adversary")) {
        const json& a = j.at("adversary");
        if (a.contains("background")) {
            const json& b = a.at("background");
            s.background_rate = get_or(b, "rate", 0.0);
            if (b.contains("mix")) {
                for (auto it = b.at("mix").begin(); it != b.at("mix").end(); ++it) {
                    s.traffic_mix[it.key()] = it.value().get<double>();
                }
            }
        }
        if (a.contains("worms")) {
            for (const auto& w : a.at("worms")) {
                WormConfig worm;
                worm.sig = w.at("sig").get<std::string>();
                worm.entry = w.at("entry").get<NodeId>();
                worm.start = get_or<Tick>(w, "start", 0);
                worm.fanout = get_or<std::uint32_t>(w, "fanout", 1);
                worm.mutation_rate = get_or(w, "mutation_rate", 0.0);
                worm.vulnerable = node_list(w, "vulnerable");
                s.worms.push_back(std::move(worm));
            }
        }
        if (a.contains("offline")) {
            for (const auto& o : a.at("offline")) {
                s.offline.push_back(OfflineConfig{o.at("node").get<NodeId>(),
                                                  o.at("sig").get<std::string>(),
                                                  o.at("at").get<Tick>(),
                                                  get_or<Tick>(o, "blackout", 0)});
            }
        }
        s.activity_period = get_or<Tick>(a, "activity_period", s.activity_period);
    }

    if (j.contains("injections")) {
        for (const auto& i : j.at("injections")) {
            s.injections.push_back(InjectionConfig{i.at("at").get<Tick>(),
                                                   i.at("kind").get<std::string>(),
                                                   get_or<std::uint64_t>(i, "id", 0)});
        }
    }

    s.validate();
    return s;
}

Scenario Scenario::from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InvalidScenario("<file>", "cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

void Scenario::validate() const {
    if (duration > 1000000) throw InvalidScenario("duration", "longer than 1e6 ticks");
    if (topo_kind != "random_tree_plus" && topo_kind != "explicit" && topo_kind != "line") {
        throw InvalidScenario("topology.kind", "unknown kind '" + topo_kind + "'");
    }
    if (nodes == 0) throw InvalidScenario("topology.nodes", "must be >= 1");
    if (topo_kind == "explicit" && edges.empty() && nodes > 1) {
        throw InvalidScenario("topology.edges", "explicit topology needs edges");
    }
    for (NodeId g : gateways) {
        if (g >= nodes) throw InvalidScenario("topology.gateways", "node out of range");
    }
    if (background_rate < 0) throw InvalidScenario("adversary.background.rate", "negative");
    double mix_total = 0;
    for (const auto& [name, share] : traffic_mix) {
        if (share < 0) throw InvalidScenario("adversary.background.mix", name + " negative");
        mix_total += share;
    }
    if (!traffic_mix.empty() && (mix_total <= 0.0)) {
        throw InvalidScenario("adversary.background.mix", "shares sum to zero");
    }
    for (const auto& w : worms) {
        if (w.entry >= nodes) throw InvalidScenario("adversary.worms.entry", "node out of range");
        if (w.fanout < 1) throw InvalidScenario("adversary.worms.fanout", "must be >= 1");
        if (w.mutation_rate < 0.0 || w.mutation_rate > 1.0) {
            throw InvalidScenario("adversary.worms.mutation_rate", "must be in [0,1]");
        }
        for (NodeId v : w.vulnerable) {
            if (v >= nodes) throw InvalidScenario("adversary.worms.vulnerable", "node out of range");
        }
    }
    for (const auto& o : offline) {
        if (o.node >= nodes) throw InvalidScenario("adversary.offline.node", "node out of range");
    }
    for (const auto& c : cell_catalog) {
        if (c.type != "matcher" && c.type != "fusion" && c.type != "prober" &&
            c.type != "repair") {
            throw InvalidScenario("immune.cells.type", "unknown type '" + c.type + "'");
        }
        if (c.type == "matcher" && c.sig.empty()) {
            throw InvalidScenario("immune.cells.sig", "matcher needs exactly one rule signature");
        }
        if (c.security_value < 0.0 || c.security_value > 1.0) {
            throw InvalidScenario("immune.cells.security_value", "must be in [0,1]");
        }
        if (c.lifetime[0] == 0 || c.lifetime[0] > c.lifetime[1]) {
            throw InvalidScenario("immune.cells.lifetime", "need 1 <= min <= max");
        }
    }
    if (placement != "uniform" && placement != "at_cnts") {
        throw InvalidScenario("immune.placement", "must be uniform|at_cnts");
    }
    if (cnts_rate < 0) throw InvalidScenario("immune.cnts_rate", "negative");
    if (params.security_threshold < 0 || params.security_threshold >= 1) {
        throw InvalidScenario("immune.params.security_threshold", "must be in [0,1)");
    }
    if (params.danger_decay <= 0 || params.danger_decay >= 1) {
        throw InvalidScenario("immune.params.danger_decay", "must be in (0,1)");
    }
    if (params.fusion_theta < 1) throw InvalidScenario("immune.params.fusion_theta", "must be >= 1");
    for (const auto& i : injections) {
        if (i.kind != "remove_cell" && i.kind != "remove_lymph" && i.kind != "remove_cnts") {
            throw InvalidScenario("injections.kind", "unknown kind '" + i.kind + "'");
        }
    }
}

std::string Scenario::to_json_text() const {
    json j;
    j["name"] = name;
    j["seed"] = seed;
    j["duration"] = duration;
    j["mode"] = to_string(mode);

    json topo{{"kind", topo_kind}, {"nodes", nodes}};
    topo["extra_edges"] = extra_edges;
    topo["topo_seed"] = topo_seed;
    if (!edges.empty()) {
        json e = json::array();
        for (auto [a, b] : edges) e.push_back(json::array({a, b}));
        topo["edges"] = e;
    }
    topo["gateways"] = gateways;
    topo["email_servers"] = email_servers;
    topo["switches"] = switches;
    topo["auto_switches"] = auto_switches;
    j["topology"] = topo;

    json c;
    c["signature_db"] = baseline_db;
    c["update_period"] = update_period;
    if (update_server) c["update_server"] = *update_server;
    c["update_failures"] = update_failures;
    json rules = json::array();
    for (const auto& r : policy_rules) {
        json rj;
        if (r.protocol) rj["protocol"] = *r.protocol;
        if (r.port) rj["port"] = *r.port;
        if (r.src) rj["src"] = *r.src;
        if (r.dst) rj["dst"] = *r.dst;
        if (r.sig) rj["sig"] = *r.sig;
        rj["action"] = r.action;
        rules.push_back(rj);
    }
    c["policy_rules"] = rules;
    json adds = json::array();
    for (const auto& a : server_additions) adds.push_back(json{{"at", a.at}, {"sig", a.sig}});
    c["server_additions"] = adds;
    c["av_value"] = av_value;
    c["fw_value"] = fw_value;
    c["filter_value"] = filter_value;
    c["ids_value"] = ids_value;
    j["classic"] = c;

    json m;
    m["lymph_hosts"] = lymph_hosts;
    m["cnts_hosts"] = cnts_hosts;
    m["cnts_rate"] = cnts_rate;
    m["placement"] = placement;
    m["warnings_enabled"] = warnings_enabled;
    json cells = json::array();
    for (const auto& spec : cell_catalog) {
        json cj{{"type", spec.type}, {"count", spec.count},
                {"security_value", spec.security_value},
                {"lifetime", json::array({spec.lifetime[0], spec.lifetime[1]})}};
        if (!spec.sig.empty()) cj["sig"] = spec.sig;
        if (!spec.repair_families.empty()) cj["repair_families"] = spec.repair_families;
        cells.push_back(cj);
    }
    m["cells"] = cells;
    if (!type_mix.empty()) m["type_mix"] = type_mix;
    m["params"] = params_json(params);
    j["immune"] = m;

    json a;
    a["background"] = json{{"rate", background_rate}, {"mix", traffic_mix}};
    json worms_j = json::array();
    for (const auto& w : worms) {
        json wj{{"sig", w.sig}, {"entry", w.entry}, {"start", w.start},
                {"fanout", w.fanout}, {"mutation_rate", w.mutation_rate}};
        if (!w.vulnerable.empty()) wj["vulnerable"] = w.vulnerable;
        worms_j.push_back(wj);
    }
    a["worms"] = worms_j;
    json off = json::array();
    for (const auto& o : offline) {
        off.push_back(json{{"node", o.node}, {"sig", o.sig}, {"at", o.at},
                           {"blackout", o.blackout}});
    }
    a["offline"] = off;
    a["activity_period"] = activity_period;
    j["adversary"] = a;

    if (!injections.empty()) {
        json inj = json::array();
        for (const auto& i : injections) {
            inj.push_back(json{{"at", i.at}, {"kind", i.kind}, {"id", i.id}});
        }
        j["injections"] = inj;
    }

    return j.dump(2);
}

} // namespace sana
