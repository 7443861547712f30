#include "core/sim.hpp"

#include <algorithm>
#include <cassert>

#include <json.hpp>

#include "core/errors.hpp"

namespace sana {

using nlohmann::json;

namespace {

std::string packet_tag(const Packet& p) {
    return "pkt" + std::to_string(p.packet_id);
}

} // namespace

Simulation::Simulation(Scenario scenario, std::optional<Mode> mode_override,
                       std::optional<std::uint64_t> seed_override, TraceLevel trace_level)
    : scenario_(std::move(scenario)),
      mode_(mode_override.value_or(scenario_.mode)),
      trace_level_(trace_level),
      master_seed_(seed_override.value_or(scenario_.seed)),
      topo_(build_topology()),
      rng_(master_seed_),
      trace_(trace_level) {
    scenario_.mode = mode_;
    scenario_.seed = master_seed_;

    envs_.reserve(topo_.node_count());
    for (NodeId n = 0; n < topo_.node_count(); ++n) {
        envs_.push_back(std::make_unique<SecurityEnvironment>(n, &receptors_));
    }
    fabric_.reset(topo_.node_count());
    for (NodeId n = 0; n < topo_.node_count(); ++n) {
        fabric_.set_forward_set(n, topo_.neighbors(n)); // default: all neighbors
    }

    mint_class_pairs();

    // knowledge base: update server starts with the configured corpus
    for (const auto& name : scenario_.baseline_db) {
        server_sigs_.insert(sigs_.introduce(name).sig_id);
    }
    compile_policy();
    adversary_ = std::make_unique<Adversary>(scenario_, topo_, sigs_);

    infection_.reset(topo_.node_count());
    blackout_until_.assign(topo_.node_count(), 0);
    mgmt_.assign(topo_.node_count(), NodeManagement{});
    last_repair_beacon_.assign(topo_.node_count(), kNoTick);
    quarantine_.assign(topo_.node_count(), QuarantineRecord{});

    if (mode_ != Mode::none) {
        place_classic_components();
    }
    if (mode_ == Mode::sana || mode_ == Mode::hybrid) {
        place_stations();
    }
    schedule_system_timers();
    if (mode_ == Mode::sana) {
        place_initial_cells();
    }
    for (NodeId n = 0; n < topo_.node_count(); ++n) {
        recompute_level(n);
    }
}

Simulation::~Simulation() = default;

Topology Simulation::build_topology() const {
    Topology::Spec spec;
    if (scenario_.topo_kind == "explicit") {
        spec.node_count = scenario_.nodes;
        spec.edges = scenario_.edges;
    } else if (scenario_.topo_kind == "line") {
        spec.node_count = scenario_.nodes;
        for (NodeId n = 0; n + 1 < scenario_.nodes; ++n) {
            spec.edges.emplace_back(n, n + 1);
        }
    } else {
        Rng topo_rng(splitmix64(scenario_.topo_seed ^ 0x746f706fULL));
        spec = Topology::random_tree_plus(scenario_.nodes, scenario_.extra_edges, topo_rng);
    }
    assign_roles(spec);
    return Topology::build(spec);
}

void Simulation::assign_roles(Topology::Spec& spec) const {
    spec.roles.assign(spec.node_count, NodeRole::host);

    std::vector<NodeId> switches = scenario_.switches;
    if (switches.empty() && scenario_.auto_switches > 0) {
        // highest-degree nodes act as network equipment; ties go to lower ids
        std::vector<std::uint32_t> degree(spec.node_count, 0);
        for (auto [a, b] : spec.edges) {
            ++degree[a];
            ++degree[b];
        }
        std::vector<NodeId> order(spec.node_count);
        for (NodeId n = 0; n < spec.node_count; ++n) order[n] = n;
        std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
            return degree[a] != degree[b] ? degree[a] > degree[b] : a < b;
        });
        for (std::uint32_t i = 0; i < scenario_.auto_switches && i < order.size(); ++i) {
            switches.push_back(order[i]);
        }
    }
    for (NodeId n : switches) {
        if (n < spec.node_count) spec.roles[n] = NodeRole::switch_;
    }
    for (NodeId n : scenario_.email_servers) {
        if (n < spec.node_count) spec.roles[n] = NodeRole::email_server;
    }
    for (NodeId n : scenario_.gateways) {
        if (n < spec.node_count) spec.roles[n] = NodeRole::gateway;
    }
}

void Simulation::mint_class_pairs() {
    for (const char* tag : {"matcher", "fusion", "prober", "repair", "lymph", "cnts", "env",
                            "classic", "admin"}) {
        class_pairs_[tag] = receptors_.mint(tag, "class");
    }
    for (const char* tag : {"res:storage", "res:memory", "res:cpu", "res:network"}) {
        class_pairs_[tag] = receptors_.mint(tag, "resource");
    }
    for (auto& env : envs_) {
        env->set_resource_lock(Resource::storage, class_pairs_["res:storage"].lock);
        env->set_resource_lock(Resource::memory, class_pairs_["res:memory"].lock);
        env->set_resource_lock(Resource::cpu, class_pairs_["res:cpu"].lock);
        env->set_resource_lock(Resource::network, class_pairs_["res:network"].lock);
    }
}

void Simulation::compile_policy() {
    for (const auto& r : scenario_.policy_rules) {
        CompiledRule rule;
        if (r.protocol) rule.protocol = protocol_from_string(*r.protocol);
        rule.port = r.port;
        rule.src = r.src;
        rule.dst = r.dst;
        if (r.sig) rule.sig = sigs_.introduce(*r.sig).sig_id;
        if (r.action == "drop") rule.action = Verdict::drop;
        else if (r.action == "alert") rule.action = Verdict::alert;
        else rule.action = Verdict::pass;
        policy_.push_back(rule);
    }
}

void Simulation::grant_standard_keys(Component& c, const std::vector<std::string>& classes) {
    auto identity = receptors_.mint(to_string(c.kind()), "identity");
    receptors_.grant(identity.key, c.id());
    c.add_key(identity.key);
    for (const auto& cls : classes) {
        auto it = class_pairs_.find(cls);
        if (it == class_pairs_.end()) continue;
        receptors_.grant(it->second.key, c.id());
        c.add_key(it->second.key);
    }
}

void Simulation::place_classic_components() {
    update_server_node_ = scenario_.update_server.value_or(
        scenario_.gateways.empty() ? NodeId{0} : scenario_.gateways.front());

    std::set<NodeId> frozen(scenario_.update_failures.begin(), scenario_.update_failures.end());

    for (NodeId n = 0; n < topo_.node_count(); ++n) {
        const NodeRole role = topo_.role(n);
        auto add = [&](std::unique_ptr<ClassicComponent> comp,
                       const std::set<EnvEventKind>& events) {
            comp->set_update_failed(frozen.count(n) != 0);
            grant_standard_keys(*comp, {"classic", "res:storage", "res:memory", "res:cpu",
                                        "res:network"});
            classic_home_[comp->id()] = n;
            envs_[n]->register_component(std::move(comp), events);
        };

        if (role == NodeRole::host || role == NodeRole::email_server ||
            role == NodeRole::gateway) {
            if (role != NodeRole::gateway) {
                auto av = std::make_unique<Antivirus>(next_component_++, scenario_.av_value,
                                                      &policy_);
                av->set_update_period(static_cast<std::uint32_t>(scenario_.update_period));
                av->db().sync(server_sigs_, server_version_);
                add(std::move(av), {EnvEventKind::packet, EnvEventKind::file_access});
                auto fw = std::make_unique<Firewall>(next_component_++, scenario_.fw_value,
                                                     &policy_);
                add(std::move(fw), {EnvEventKind::packet});
            }
        }
        if (role == NodeRole::switch_ || role == NodeRole::router ||
            role == NodeRole::gateway) {
            auto pf = std::make_unique<PacketFilter>(next_component_++, scenario_.filter_value,
                                                     &policy_);
            add(std::move(pf), {EnvEventKind::packet});
        }
        if (role == NodeRole::gateway || role == NodeRole::email_server) {
            auto ids = std::make_unique<Ids>(next_component_++, scenario_.ids_value, &policy_);
            ids->set_update_period(static_cast<std::uint32_t>(scenario_.update_period));
            ids->db().sync(server_sigs_, server_version_);
            add(std::move(ids), {EnvEventKind::packet});
        }
    }
}

void Simulation::place_stations() {
    lymph_hosts_ = scenario_.lymph_hosts;
    if (lymph_hosts_.empty()) {
        for (NodeId n = 0; n < topo_.node_count(); ++n) {
            if (topo_.is_network_equipment(n)) lymph_hosts_.push_back(n);
        }
        if (lymph_hosts_.empty()) lymph_hosts_.push_back(0);
    }
    cnts_hosts_ = scenario_.cnts_hosts;
    if (cnts_hosts_.empty()) {
        // two stations by default so no single instance is critical
        for (NodeId n : lymph_hosts_) {
            cnts_hosts_.push_back(n);
            if (cnts_hosts_.size() == 2) break;
        }
    }

    for (NodeId host : lymph_hosts_) {
        auto lymph = std::make_unique<LymphStation>(next_component_++, 0.2);
        grant_standard_keys(*lymph, {"lymph", "res:storage", "res:memory", "res:cpu",
                                     "res:network"});
        lymph_ids_.push_back(lymph->id());
        classic_home_[lymph->id()] = host;
        envs_[host]->register_component(std::move(lymph), {});
    }
    for (NodeId host : cnts_hosts_) {
        auto cnts = std::make_unique<CntsStation>(next_component_++, 0.2, scenario_.cnts_rate);
        grant_standard_keys(*cnts, {"cnts", "res:storage", "res:memory", "res:cpu",
                                    "res:network"});
        cnts_ids_.push_back(cnts->id());
        classic_home_[cnts->id()] = host;
        envs_[host]->register_component(std::move(cnts), {});
    }

    // cell templates come from the catalog; base weights follow counts
    double total_count = 0;
    for (const auto& spec : scenario_.cell_catalog) total_count += spec.count;
    for (const auto& spec : scenario_.cell_catalog) {
        CellTemplate tmpl;
        tmpl.spec = spec;
        tmpl.name = spec.type;
        if (!spec.sig.empty()) {
            auto sig = sigs_.introduce(spec.sig);
            tmpl.rule_sig = sig.sig_id;
            tmpl.family = sig.family;
            tmpl.name += ":" + spec.sig;
        }
        for (const auto& fam_name : spec.repair_families) {
            tmpl.repair_families.push_back(sigs_.introduce(fam_name).family);
        }
        if (spec.type == "repair" && !tmpl.repair_families.empty()) {
            tmpl.family = tmpl.repair_families.front();
        }
        auto mix_it = scenario_.type_mix.find(tmpl.name);
        if (mix_it != scenario_.type_mix.end()) {
            tmpl.base_weight = mix_it->second;
        } else {
            tmpl.base_weight = total_count > 0 ? spec.count / total_count : 1.0;
        }
        templates_.push_back(std::move(tmpl));
    }
}

void Simulation::place_initial_cells() {
    for (std::size_t t = 0; t < templates_.size(); ++t) {
        for (std::uint32_t i = 0; i < templates_[t].spec.count; ++i) {
            NodeId at;
            if (scenario_.placement == "at_cnts" && !cnts_hosts_.empty()) {
                at = cnts_hosts_[(initial_population_) % cnts_hosts_.size()];
            } else {
                at = static_cast<NodeId>(rng_.init.below(topo_.node_count()));
            }
            mint_cell(t, at, rng_.init, "deploy");
            ++initial_population_;
        }
    }
    metrics_.cells_minted = 0; // initial deployment is not generation
}

void Simulation::schedule_system_timers() {
    // insertion order fixes same-tick ordering within component_timer
    for (std::size_t i = 0; i < scenario_.server_additions.size(); ++i) {
        schedule(std::max<Tick>(1, scenario_.server_additions[i].at), EventKind::component_timer,
                 TimerFire{TimerKind::update_server, i});
    }
    schedule(1, EventKind::component_timer, TimerFire{TimerKind::adversary, 0});
    for (auto& [id, node] : classic_home_) {
        Component* c = envs_[node]->find(id);
        if (!c) continue;
        const std::uint32_t period = c->timer_period(scenario_.params);
        if (period > 0) {
            schedule(period, EventKind::component_timer, TimerFire{TimerKind::component_poll, id});
        }
    }
    for (NodeId n = 0; n < topo_.node_count(); ++n) {
        if (mode_ == Mode::sana || mode_ == Mode::hybrid) {
            schedule(scenario_.params.env_check_period, EventKind::component_timer,
                     TimerFire{TimerKind::env_check, n});
        }
    }
    schedule(1, EventKind::component_timer, TimerFire{TimerKind::self_management, 0});
    schedule(1, EventKind::cell_migration, MigrationPhase{});
    for (std::size_t i = 0; i < cnts_ids_.size(); ++i) {
        schedule(1, EventKind::cnts_generation, CntsGeneration{static_cast<std::uint32_t>(i)});
    }
    for (std::size_t i = 0; i < scenario_.injections.size(); ++i) {
        schedule(std::max<Tick>(1, scenario_.injections[i].at), EventKind::component_timer,
                 TimerFire{TimerKind::injection, i});
    }
}

// ---------------------------------------------------------------- stepping

std::vector<Event> Simulation::step() {
    ++clock_;

    // start-of-tick decay and budget reset; fresh contributions arriving
    // during the tick are not decayed until the next one
    for (auto& m : mgmt_) {
        m.attraction *= scenario_.params.field_decay;
        if (m.attraction < 1e-9) m.attraction = 0.0;
    }
    for (CellId id : live_cell_ids()) {
        auto loc = cell_location_.find(id);
        auto* c = dynamic_cast<ArtificialCell*>(envs_[loc->second]->find(id));
        if (c && c->cell_type() == CellType::matcher) {
            c->decay_danger(scenario_.params.danger_decay);
        }
    }
    for (auto& env : envs_) {
        env->reset_budgets();
    }

    std::vector<Event> executed;
    in_step_ = true;
    while (!queue_.empty() && queue_.top().due <= clock_) {
        Event e = queue_.pop();
        executed.push_back(e);
        ++metrics_.events_executed;
        switch (e.kind) {
        case EventKind::packet_arrival:
            handle_packet_arrival(std::get<PacketArrival>(e.payload));
            break;
        case EventKind::substance_arrival:
            handle_substance_arrival(std::get<SubstanceArrival>(e.payload));
            break;
        case EventKind::file_access:
            handle_file_access(std::get<FileAccessEvent>(e.payload));
            break;
        case EventKind::component_timer:
            handle_timer(std::get<TimerFire>(e.payload));
            break;
        case EventKind::cell_migration:
            handle_migration_phase();
            break;
        case EventKind::cell_expiry:
            handle_cell_expiry(std::get<CellExpiry>(e.payload));
            break;
        case EventKind::cnts_generation:
            handle_cnts_generation(std::get<CntsGeneration>(e.payload));
            break;
        }
    }
    in_step_ = false;

    end_of_tick_accounting();
    return executed;
}

void Simulation::run() {
    for (Tick t = 0; t < scenario_.duration; ++t) {
        step();
    }
}

void Simulation::schedule(Tick due, EventKind kind, EventPayload payload) {
    if (due < clock_) {
        throw PastDue("due " + std::to_string(due) + " < clock " + std::to_string(clock_));
    }
    queue_.push(due, kind, std::move(payload));
}

void Simulation::send_packet(Packet packet) {
    if (packet.src >= topo_.node_count() || packet.dst >= topo_.node_count()) {
        ++metrics_.packets_unroutable;
        throw UnroutablePacket(packet_tag(packet) + " endpoints outside topology");
    }
    if (packet.packet_id == 0) {
        packet.packet_id = packet_seq_++;
    }
    ++metrics_.packets_sent;
    if (packet.infection_attempt && !packet.payload_sigs.empty()) {
        const auto& sig = sigs_.get(packet.payload_sigs.front());
        if (sig.generation >= 1) ++metrics_.mutant_packets_sent;
    }
    if (infection_.quarantined[packet.src]) {
        ++metrics_.packets_dropped;
        trace_.event(clock_, "packet_drop", packet.src, packet_tag(packet) + " quarantined_src");
        return;
    }
    packet.hop_trace = {packet.src};
    schedule(clock_, EventKind::packet_arrival, PacketArrival{std::move(packet), packet.src});
}

// ----------------------------------------------------------- event handling

Simulation::DispatchOutcome Simulation::run_dispatch(
    NodeId node, EnvEventKind kind, const Packet* packet, SigId file_sig,
    std::vector<std::pair<std::string, Verdict>>* out) {
    DispatchOutcome outcome;
    SecurityEnvironment& env = *envs_[node];
    const bool coordinated = mode_ == Mode::sana || mode_ == Mode::hybrid;
    DispatchContext ctx(*this, node, coordinated);

    for (Component* comp : env.subscribers(kind)) {
        if (!env.spend_action(clock_, comp->id(), 1, scenario_.params.action_budget)) {
            trace_.audit(clock_, node, comp->label(), to_string(kind), "denied");
            continue;
        }
        Verdict verdict = packet ? comp->on_packet(ctx, *packet)
                                 : comp->on_file_access(ctx, file_sig);
        trace_.audit(clock_, node, comp->label(), to_string(kind), to_string(verdict));
        ++metrics_.inspections;
        if (out) out->emplace_back(comp->label(), verdict);
        if (verdict == Verdict::drop) {
            outcome.dropped = true;
            outcome.dropped_by = comp->label();
            break; // first drop wins; later subscribers never see the packet
        }
    }

    metrics_.checks_performed += ctx.checks_performed();
    metrics_.checks_redundant += ctx.checks_redundant();
    if (trace_.level() == TraceLevel::full) {
        const std::string tag = packet ? packet_tag(*packet) : "file";
        for (const auto& [who, key] : ctx.check_log()) {
            trace_.check(clock_, node, who, tag + ":" + key);
        }
    }
    outcome.sig_detected = ctx.sig_detected();
    return outcome;
}

void Simulation::handle_packet_arrival(PacketArrival& pa) {
    Packet& p = pa.packet;
    const NodeId n = pa.at;
    ++metrics_.packet_arrivals;
    trace_.event(clock_, "packet_arrival", n,
                 packet_tag(p) + " " + std::to_string(p.src) + ">" + std::to_string(p.dst) +
                     " " + to_string(p.protocol) + " hop" +
                     std::to_string(p.hop_trace.size() - 1));

    if (infection_.quarantined[n]) {
        ++metrics_.packets_dropped;
        trace_.event(clock_, "packet_drop", n, packet_tag(p) + " quarantine");
        return;
    }

    DispatchOutcome outcome;
    if (!envs_[n]->blackout_active(clock_)) {
        outcome = run_dispatch(n, EnvEventKind::packet, &p, kNoSig, nullptr);
    }
    if (outcome.dropped) {
        ++metrics_.packets_dropped;
        trace_.event(clock_, "packet_drop", n, packet_tag(p) + " by " + outcome.dropped_by);
        return;
    }

    if (n == p.dst) {
        ++metrics_.packets_delivered;
        trace_.event(clock_, "packet_delivered", n, packet_tag(p));
        if (p.infection_attempt && !p.payload_sigs.empty() && !infection_.infected(n)) {
            const SigId sig = p.payload_sigs.front();
            if (adversary_->vulnerable(sigs_.family_of(sig), n) && !outcome.sig_detected) {
                infect(n, sig, "worm_packet");
            }
        }
        return;
    }

    const NodeId next = topo_.next_hop(n, p.dst);
    p.hop_trace.push_back(next);
    ++metrics_.packet_hops;
    schedule(clock_ + 1, EventKind::packet_arrival, PacketArrival{std::move(p), next});
}

void Simulation::handle_substance_arrival(const SubstanceArrival& sa) {
    const SubstanceBodyPtr& body = fabric_.body(sa.substance);
    const NodeId n = sa.at;

    if (clock_ > body->emitted_at + body->time_to_live) {
        trace_.substance(clock_, body->id, n, "expire");
        return;
    }
    if (envs_[n]->blackout_active(clock_)) {
        return; // node is off the protection plane; may process a later copy
    }
    if (!fabric_.first_visit(body->id, n)) {
        return; // at-most-once per (substance, node)
    }

    // the environment itself reads attraction beacons
    bool any_reader = false;
    if (body->type == MessageType::attraction_beacon) {
        const std::uint32_t travelled = body->initial_hops - sa.hops_to_go;
        mgmt_[n].attraction +=
            beacon_pull(body->strength, scenario_.params.attraction_geometric, travelled);
        any_reader = true;
    }

    const bool coordinated = mode_ == Mode::sana || mode_ == Mode::hybrid;
    DispatchContext ctx(*this, n, coordinated);
    for (Component* comp : envs_[n]->all_components()) {
        if (!comp->active()) continue;
        if (!can_read(*body, comp->keys())) {
            continue; // existence visible, payload locked
        }
        if (!envs_[n]->spend_action(clock_, comp->id(), 1, scenario_.params.action_budget)) {
            trace_.audit(clock_, n, comp->label(), "substance_arrival", "denied");
            continue;
        }
        any_reader = true;
        Verdict verdict = comp->on_substance(ctx, *body);
        trace_.audit(clock_, n, comp->label(), "substance_arrival", to_string(verdict));
    }
    trace_.substance(clock_, body->id, n, any_reader ? "deliver" : "locked");

    if (sa.hops_to_go > 0) {
        for (NodeId target : fabric_.forward_set(n)) {
            ++metrics_.substance_hops;
            schedule(clock_ + 1, EventKind::substance_arrival,
                     SubstanceArrival{body->id, target, sa.hops_to_go - 1});
        }
        trace_.substance(clock_, body->id, n, "forward");
    }
}

void Simulation::handle_file_access(const FileAccessEvent& fe) {
    if (envs_[fe.node]->blackout_active(clock_)) return;
    trace_.event(clock_, "file_access", fe.node, "sig " + sigs_.name(fe.sig));
    run_dispatch(fe.node, EnvEventKind::file_access, nullptr, fe.sig, nullptr);
}

void Simulation::handle_timer(const TimerFire& tf) {
    switch (tf.timer) {
    case TimerKind::adversary:
        adversary_tick();
        schedule(clock_ + 1, EventKind::component_timer, TimerFire{TimerKind::adversary, 0});
        break;
    case TimerKind::update_server: {
        const auto& add = scenario_.server_additions[tf.ref];
        server_sigs_.insert(sigs_.introduce(add.sig).sig_id);
        ++server_version_;
        trace_.event(clock_, "server_update", update_server_node_.value_or(0),
                     "v" + std::to_string(server_version_) + " +" + add.sig);
        break;
    }
    case TimerKind::component_poll: {
        auto it = classic_home_.find(tf.ref);
        if (it == classic_home_.end()) break;
        Component* comp = envs_[it->second]->find(tf.ref);
        if (!comp) break;
        const std::uint32_t period = comp->timer_period(scenario_.params);
        if (comp->active() && !envs_[it->second]->blackout_active(clock_)) {
            const bool coordinated = mode_ == Mode::sana || mode_ == Mode::hybrid;
            DispatchContext ctx(*this, it->second, coordinated);
            comp->on_timer(ctx);
        }
        if (period > 0) {
            schedule(clock_ + period, EventKind::component_timer,
                     TimerFire{TimerKind::component_poll, tf.ref});
        }
        break;
    }
    case TimerKind::cell_task: {
        auto loc = cell_location_.find(tf.ref);
        if (loc == cell_location_.end()) break; // expired or broken down
        Component* comp = envs_[loc->second]->find(tf.ref);
        if (!comp) break;
        const std::uint32_t period = comp->timer_period(scenario_.params);
        if (comp->active() && !envs_[loc->second]->blackout_active(clock_)) {
            const bool coordinated = mode_ == Mode::sana || mode_ == Mode::hybrid;
            DispatchContext ctx(*this, loc->second, coordinated);
            comp->on_timer(ctx);
        }
        if (period > 0) {
            schedule(clock_ + period, EventKind::component_timer,
                     TimerFire{TimerKind::cell_task, tf.ref});
        }
        break;
    }
    case TimerKind::env_check:
        env_check_tick(static_cast<NodeId>(tf.ref));
        schedule(clock_ + scenario_.params.env_check_period, EventKind::component_timer,
                 TimerFire{TimerKind::env_check, tf.ref});
        break;
    case TimerKind::self_management:
        self_management_tick();
        schedule(clock_ + 1, EventKind::component_timer,
                 TimerFire{TimerKind::self_management, 0});
        break;
    case TimerKind::injection:
        apply_injection(scenario_.injections[tf.ref]);
        break;
    }
}

void Simulation::adversary_tick() {
    // offline infections first: they change state the worm step may read
    for (const auto& off : adversary_->offline_due(clock_)) {
        const SigId sig = sigs_.by_name(off.sig);
        blackout_until_[off.node] = clock_ + off.blackout;
        envs_[off.node]->set_blackout_until(clock_ + off.blackout);
        trace_.event(clock_, "offline_boot", off.node,
                     "blackout " + std::to_string(off.blackout) + " ticks");
        if (!infection_.infected(off.node)) {
            infect(off.node, sig, "offline_boot");
        }
    }

    for (Packet& p : adversary_->background_tick(rng_.adversary, packet_seq_)) {
        send_packet(std::move(p));
    }
    for (Packet& p : adversary_->worm_tick(rng_.adversary, clock_, infection_, packet_seq_)) {
        send_packet(std::move(p));
    }
    for (auto [node, sig] : adversary_->activity_tick(clock_, infection_, blackout_until_)) {
        schedule(clock_, EventKind::file_access, FileAccessEvent{node, sig});
    }
}

void Simulation::env_check_tick(NodeId node) {
    SecurityEnvironment& env = *envs_[node];
    if (env.blackout_active(clock_)) return;

    std::vector<ComponentId> to_evict;
    for (Component* comp : env.all_components()) {
        if (!comp->active()) continue;
        if (!env.check_component(clock_, *comp)) {
            to_evict.push_back(comp->id());
        }
    }
    for (ComponentId id : to_evict) {
        Component* comp = env.find(id);
        const std::string label = comp ? comp->label() : std::to_string(id);
        const std::string detail = env.evict(clock_, id);
        evicted_ever_.insert(id);
        cell_location_.erase(id);
        trace_.event(clock_, "eviction", node, label + " " + detail);

        SubstanceBody report;
        report.type = MessageType::alert;
        report.alert_kind = AlertKind::eviction;
        report.implicated = node;
        report.emitter = "env" + std::to_string(node);
        report.detail = label + ": " + detail;
        report.locks = {class_lock("lymph"), class_lock("cnts")};
        report.initial_hops = std::max(scenario_.params.alert_hops, hops_to_nearest_lymph(node));
        report.time_to_live = report.initial_hops + scenario_.params.substance_ttl_slack;
        emit_substance(node, std::move(report));
        recompute_level(node);
    }
}

void Simulation::self_management_tick() {
    const Params& p = scenario_.params;
    const bool immune_stack = mode_ == Mode::sana || mode_ == Mode::hybrid;

    for (NodeId n = 0; n < topo_.node_count(); ++n) {
        recompute_level(n);
        NodeManagement& m = mgmt_[n];
        const bool off = envs_[n]->blackout_active(clock_);

        if (immune_stack && !off && m.level < p.security_threshold) {
            if (m.below_since == kNoTick) m.below_since = clock_;
            if (m.last_beacon == kNoTick || clock_ - m.last_beacon >= p.beacon_refresh) {
                emit_level_beacon(n);
                m.last_beacon = clock_;
            }
        } else {
            m.below_since = kNoTick;
            m.last_beacon = kNoTick;
        }

        // flagged nodes call for repair capability
        if (immune_stack && !off && quarantine_[n].active &&
            (last_repair_beacon_[n] == kNoTick ||
             clock_ - last_repair_beacon_[n] >= p.beacon_refresh)) {
            emit_repair_beacon(n);
            last_repair_beacon_[n] = clock_;
        }
        if (!quarantine_[n].active) {
            last_repair_beacon_[n] = kNoTick;
        }

        // quarantine observation: lift once clean and calm long enough
        QuarantineRecord& q = quarantine_[n];
        if (q.active && !infection_.infected(n) && q.cleaned_at != kNoTick &&
            clock_ >= q.cleaned_at + p.observation_period && q.last_alert <= q.cleaned_at) {
            q.active = false;
            infection_.quarantined[n] = false;
            trace_.infection(clock_, n, "clean");
            notify_admin(n, "quarantine lifted from node " + std::to_string(n));
        }

        trace_.level(clock_, n, m.level, m.attraction);
    }

    // heartbeats keep lymph caches and snapshots current
    if ((mode_ == Mode::sana || mode_ == Mode::hybrid) && !lymph_hosts_.empty() &&
        p.heartbeat_period > 0 && clock_ % p.heartbeat_period == 0) {
        for (NodeId n = 0; n < topo_.node_count(); ++n) {
            if (!envs_[n]->blackout_active(clock_)) {
                emit_heartbeat(n);
            }
        }
    }

    // staleness samples for the maintainability metric
    if (clock_ % 10 == 0) {
        for (auto& [id, node] : classic_home_) {
            const Component* comp = envs_[node]->find(id);
            if (comp && comp->has_versioned_db()) {
                ++metrics_.staleness_samples;
                metrics_.staleness_total_lag += server_version_ - comp->db_version();
            }
        }
    }
}

void Simulation::handle_migration_phase() {
    const Params& p = scenario_.params;

    for (CellId id : live_cell_ids()) {
        const NodeId at = cell_location_.at(id);
        auto* cell = dynamic_cast<ArtificialCell*>(envs_[at]->find(id));
        if (!cell || !cell->active()) continue;

        const bool near_expiry = cell->expires_at() <= clock_ + p.expiry_grace;
        const double without =
            level_of(at, id, /*skip_near_expiry=*/true);
        const bool needed = !near_expiry && without < p.security_threshold + p.anchor_margin;

        if (needed) {
            cell->set_mobility(MobilityState::anchored);
            cell->set_calm_streak(0);
            continue;
        }
        cell->set_calm_streak(cell->calm_streak() + 1);
        if (cell->mobility() == MobilityState::anchored) {
            if (cell->calm_streak() >= p.hysteresis_ticks) {
                cell->set_mobility(MobilityState::roaming);
            } else {
                continue; // hysteresis: stay anchored a little longer
            }
        }

        const auto& neighbors = topo_.neighbors(at);
        std::vector<double> attraction;
        attraction.reserve(neighbors.size() + 1);
        attraction.push_back(mgmt_[at].attraction);
        for (NodeId nb : neighbors) {
            attraction.push_back(mgmt_[nb].attraction);
        }
        const std::size_t choice = migration_choice(rng_.cells, p.autonomy_epsilon, attraction);
        if (choice == 0) continue;

        const NodeId target = neighbors[choice - 1];
        auto moving = envs_[at]->withdraw(id);
        assert(moving);
        std::set<EnvEventKind> events;
        if (cell->cell_type() == CellType::matcher) {
            events = {EnvEventKind::packet, EnvEventKind::file_access};
        }
        envs_[target]->register_component(std::move(moving), events);
        cell_location_[id] = target;
        trace_.event(clock_, "cell_move", target,
                     cell->label() + " " + std::to_string(at) + ">" + std::to_string(target));
    }

    schedule(clock_ + 1, EventKind::cell_migration, MigrationPhase{});
}

void Simulation::handle_cell_expiry(const CellExpiry& ce) {
    auto it = cell_location_.find(ce.cell);
    if (it == cell_location_.end()) return; // already gone
    remove_cell(ce.cell, /*report_death=*/true);
}

void Simulation::handle_cnts_generation(const CntsGeneration& cg) {
    if (cg.station >= cnts_ids_.size()) return;
    CntsStation* station = cnts_station(cg.station);
    if (!station || !station->active()) return; // a dead factory stays dead

    const NodeId host = classic_home_.at(cnts_ids_[cg.station]);
    std::uint32_t due = station->whole_cells_due();
    if (due > 0 && !templates_.empty()) {
        std::vector<double> base;
        std::vector<FamilyId> families;
        base.reserve(templates_.size());
        for (const auto& tmpl : templates_) {
            base.push_back(tmpl.base_weight);
            families.push_back(tmpl.family);
        }
        for (std::uint32_t i = 0; i < due; ++i) {
            auto weights = station->adapted_weights(base, families, scenario_.params.reweight_step,
                                                    clock_, scenario_.params.situation_window);
            const std::size_t choice = rng_.cells.weighted(weights);
            ArtificialCell* cell = mint_cell(choice, host, rng_.cells, station->label());
            station->note_mint();
            ++metrics_.cells_minted;

            SubstanceBody mint;
            mint.type = MessageType::status_report;
            mint.detail = "cell_mint";
            mint.cell_type_tag = templates_[choice].name;
            mint.emitter = station->label();
            mint.locks = {class_lock("cnts")};
            std::uint32_t farthest = 0;
            for (NodeId other : cnts_hosts_) {
                farthest = std::max(farthest, topo_.distance(host, other));
            }
            mint.initial_hops = farthest;
            mint.time_to_live = farthest + scenario_.params.substance_ttl_slack;
            emit_substance(host, std::move(mint));
            (void)cell;
        }
    }
    schedule(clock_ + 1, EventKind::cnts_generation, CntsGeneration{cg.station});
}

void Simulation::apply_injection(const InjectionConfig& inj) {
    if (inj.kind == "remove_cell") {
        kill_cell(inj.id);
    } else if (inj.kind == "remove_lymph") {
        disable_station(static_cast<NodeId>(inj.id), ComponentKind::lymph_node);
    } else if (inj.kind == "remove_cnts") {
        disable_station(static_cast<NodeId>(inj.id), ComponentKind::cnts);
    }
}

// ------------------------------------------------------------ cell plumbing

ArtificialCell* Simulation::mint_cell(std::size_t template_index, NodeId at, Rng& rng,
                                      const std::string& minted_by) {
    const CellTemplate& tmpl = templates_[template_index];
    const ComponentId id = next_component_++;
    const Tick lifetime =
        static_cast<Tick>(rng.range(static_cast<std::int64_t>(tmpl.spec.lifetime[0]),
                                    static_cast<std::int64_t>(tmpl.spec.lifetime[1])));
    const CellType type = cell_type_from_string(tmpl.spec.type);

    auto cell = std::make_unique<ArtificialCell>(id, type,
                                                 "cell" + std::to_string(id) + ":" + tmpl.name,
                                                 tmpl.spec.security_value, clock_, lifetime);
    cell->set_template_name(tmpl.name);
    cell->rule_sig = tmpl.rule_sig;
    cell->rule_family = tmpl.family;
    cell->repair_families = tmpl.repair_families;

    std::vector<std::string> classes{to_string(type), "res:cpu", "res:network"};
    if (type == CellType::repair) classes.push_back("res:storage");
    grant_standard_keys(*cell, classes);

    ArtificialCell* raw = cell.get();
    register_cell(std::move(cell), at);
    trace_.event(clock_, "cell_mint", at, raw->label() + " by " + minted_by + " life " +
                                              std::to_string(lifetime));
    return raw;
}

void Simulation::register_cell(std::unique_ptr<ArtificialCell> cell, NodeId at) {
    const ComponentId id = cell->id();
    const CellType type = cell->cell_type();
    std::set<EnvEventKind> events;
    if (type == CellType::matcher) {
        events = {EnvEventKind::packet, EnvEventKind::file_access};
    }
    const std::uint32_t period = cell->timer_period(scenario_.params);
    const Tick expiry = cell->expires_at();
    envs_[at]->register_component(std::move(cell), events);
    cell_location_[id] = at;
    schedule(std::max(clock_ + 1, expiry), EventKind::cell_expiry, CellExpiry{id});
    if (period > 0) {
        // stagger first firings so probes and evaluations spread out
        schedule(clock_ + 1 + (id % period), EventKind::component_timer,
                 TimerFire{TimerKind::cell_task, id});
    }
}

void Simulation::remove_cell(CellId id, bool report_death) {
    auto it = cell_location_.find(id);
    if (it == cell_location_.end()) return;
    const NodeId at = it->second;
    auto* cell = dynamic_cast<ArtificialCell*>(envs_[at]->find(id));
    std::string tag = cell ? cell->template_name() : "?";
    auto owned = envs_[at]->withdraw(id);
    cell_location_.erase(it);
    ++metrics_.cells_expired;
    trace_.event(clock_, report_death ? "cell_expiry" : "cell_breakdown", at,
                 (owned ? owned->label() : std::to_string(id)));

    if (report_death && !cnts_hosts_.empty()) {
        SubstanceBody death;
        death.type = MessageType::death_record;
        death.cell_type_tag = tag;
        death.emitter = owned ? owned->label() : "cell";
        death.locks = {class_lock("cnts")};
        death.initial_hops = hops_to_nearest_cnts(at) + 1;
        death.time_to_live = death.initial_hops + scenario_.params.substance_ttl_slack;
        emit_substance(at, std::move(death));
    }
}

double Simulation::level_of(NodeId node, CellId excluding, bool skip_near_expiry) const {
    if (envs_[node]->blackout_active(clock_)) return 0.0;
    std::vector<double> values;
    for (const Component* comp : envs_[node]->all_components()) {
        if (!comp->active() || comp->id() == excluding) continue;
        if (skip_near_expiry && comp->kind() == ComponentKind::artificial_cell) {
            const auto* cell = dynamic_cast<const ArtificialCell*>(comp);
            if (cell && cell->expires_at() <= clock_ + scenario_.params.expiry_grace) {
                continue; // about to shut down; doesn't count as cover
            }
        }
        values.push_back(comp->security_value());
    }
    return compute_level(values);
}

void Simulation::recompute_level(NodeId node) {
    mgmt_[node].level = level_of(node, /*excluding=*/0, /*skip_near_expiry=*/false);
}

void Simulation::infect(NodeId node, SigId sig, const char* how) {
    infection_.status[node] = InfectionStatus::infected;
    infection_.infected_at[node] = clock_;
    infection_.infecting_sig[node] = sig;
    ++metrics_.infections_total;
    const FamilyId family = sigs_.family_of(sig);
    metrics_.family_introduced_at.emplace(family, clock_);
    trace_.infection(clock_, node, "infected");
    trace_.event(clock_, "infection", node, std::string(how) + " " + sigs_.name(sig));
}

// ----------------------------------------------------------- substance API

SubstanceId Simulation::emit_substance(NodeId from, SubstanceBody body) {
    for (const auto& lock : body.locks) {
        if (!receptors_.minted(lock)) {
            throw UnmintedLock("substance lock " + std::to_string(lock.pair) +
                               " was never minted");
        }
    }
    if (body.locks.empty()) {
        throw UnmintedLock("substance needs at least one lock");
    }
    body.id = fabric_.next_id();
    body.origin = from;
    body.emitted_at = in_step_ ? clock_ : clock_ + 1;
    ++metrics_.substances_emitted;

    if (body.type == MessageType::alert) {
        ++metrics_.alerts_total;
        if (body.alert_kind == AlertKind::sig_family) ++metrics_.family_match_alerts;
        if (body.sig != kNoSig) {
            metrics_.family_first_alert.emplace(body.family, clock_);
            if (body.generation >= 1) ++metrics_.mutant_alerts;
        }
        if (body.implicated != kNoNode && body.implicated < quarantine_.size()) {
            quarantine_[body.implicated].last_alert = clock_;
        }
    }

    const Tick due = body.emitted_at;
    trace_.substance(due, body.id, from, "emit");
    auto shared = std::make_shared<const SubstanceBody>(std::move(body));
    fabric_.remember(shared);
    // local presentation first, then outward diffusion
    schedule(due, EventKind::substance_arrival,
             SubstanceArrival{shared->id, from, shared->initial_hops});
    return shared->id;
}

ReceptorLock Simulation::class_lock(const std::string& tag) const {
    return class_pairs_.at(tag).lock;
}

std::uint32_t Simulation::hops_to_nearest_lymph(NodeId from) const {
    std::uint32_t best = 0;
    bool found = false;
    for (NodeId host : lymph_hosts_) {
        const std::uint32_t d = topo_.distance(from, host);
        if (!found || d < best) {
            best = d;
            found = true;
        }
    }
    return found ? best : scenario_.params.alert_hops;
}

std::uint32_t Simulation::hops_to_nearest_cnts(NodeId from) const {
    std::uint32_t best = 0;
    bool found = false;
    for (NodeId host : cnts_hosts_) {
        const std::uint32_t d = topo_.distance(from, host);
        if (!found || d < best) {
            best = d;
            found = true;
        }
    }
    return found ? best : scenario_.params.alert_hops;
}

std::vector<NodeId> Simulation::probe_targets(NodeId at) const {
    std::vector<NodeId> targets{at};
    const auto& nb = topo_.neighbors(at);
    targets.insert(targets.end(), nb.begin(), nb.end());
    return targets;
}

ProbeAnswer Simulation::probe_node(NodeId target) {
    ProbeAnswer answer;
    if (envs_[target]->blackout_active(clock_)) {
        return answer; // silence
    }
    answer.responded = true;
    answer.level = mgmt_[target].level;
    std::uint32_t min_version = UINT32_MAX;
    for (const Component* comp : envs_[target]->all_components()) {
        if (comp->active() && comp->has_versioned_db()) {
            min_version = std::min(min_version, comp->db_version());
        }
    }
    if (min_version != UINT32_MAX) {
        answer.has_versioned = true;
        answer.min_db_version = min_version;
    }
    return answer;
}

void Simulation::request_quarantine(NodeId node, const std::string& reason,
                                    const std::string& by) {
    if (infection_.quarantined[node]) return;
    infection_.quarantined[node] = true;
    QuarantineRecord& q = quarantine_[node];
    q.active = true;
    q.since = clock_;
    q.cleaned_at = infection_.infected(node) ? kNoTick : clock_;
    ++metrics_.quarantines;
    trace_.infection(clock_, node, "quarantined");
    trace_.event(clock_, "quarantine", node, reason + " by " + by);
}

bool Simulation::node_needs_repair(NodeId node) const {
    return quarantine_[node].active;
}

bool Simulation::try_disinfect(NodeId node, const std::vector<FamilyId>& families,
                               const std::string& by) {
    if (!infection_.infected(node)) {
        trace_.event(clock_, "repair_noop", node, by + " found nothing to clean");
        return false;
    }
    const FamilyId family = sigs_.family_of(infection_.infecting_sig[node]);
    if (std::find(families.begin(), families.end(), family) == families.end()) {
        trace_.event(clock_, "repair_mismatch", node,
                     by + " lacks action for " + sigs_.family_name(family));
        return false;
    }
    infection_.status[node] = InfectionStatus::clean;
    infection_.infecting_sig[node] = kNoSig;
    infection_.infected_at[node] = kNoTick;
    quarantine_[node].cleaned_at = clock_;
    ++metrics_.disinfections;
    trace_.event(clock_, "disinfect", node, by + " cleaned " + sigs_.family_name(family));
    if (!infection_.quarantined[node]) {
        trace_.infection(clock_, node, "clean");
    }

    SubstanceBody report;
    report.type = MessageType::status_report;
    report.detail = "cleaned";
    report.implicated = node;
    report.emitter = by;
    report.locks = {class_lock("lymph"), class_lock("cnts")};
    report.initial_hops = std::max(scenario_.params.alert_hops, hops_to_nearest_lymph(node));
    report.time_to_live = report.initial_hops + scenario_.params.substance_ttl_slack;
    emit_substance(node, std::move(report));
    return true;
}

void Simulation::release_cells(NodeId at, FamilyId family, std::uint32_t count,
                               const std::string& by) {
    // prefer repair capability for the family, then matchers
    std::optional<std::size_t> pick;
    for (std::size_t i = 0; i < templates_.size(); ++i) {
        const auto& tmpl = templates_[i];
        if (tmpl.spec.type == "repair" &&
            std::find(tmpl.repair_families.begin(), tmpl.repair_families.end(), family) !=
                tmpl.repair_families.end()) {
            pick = i;
            break;
        }
    }
    if (!pick) {
        for (std::size_t i = 0; i < templates_.size(); ++i) {
            if (templates_[i].spec.type == "matcher" && templates_[i].family == family) {
                pick = i;
                break;
            }
        }
    }
    if (!pick) return; // no capability for this family in the catalog
    for (std::uint32_t i = 0; i < count; ++i) {
        mint_cell(*pick, at, rng_.cells, by);
        ++metrics_.cells_minted;
    }
}

void Simulation::notify_admin(NodeId node, const std::string& text) {
    ++metrics_.admin_lines;
    trace_.admin(clock_, "[node " + std::to_string(node) + "] " + text);
}

void Simulation::local_log(NodeId node, const std::string& line) {
    ++metrics_.local_log_lines;
    trace_.event(clock_, "local_log", node, line);
}

void Simulation::emit_heartbeat(NodeId node) {
    SubstanceBody hb;
    hb.type = MessageType::status_report;
    hb.detail = "heartbeat";
    hb.report_level = mgmt_[node].level;
    std::uint32_t min_version = UINT32_MAX;
    for (const Component* comp : envs_[node]->all_components()) {
        if (comp->active() && comp->has_versioned_db()) {
            min_version = std::min(min_version, comp->db_version());
        }
    }
    hb.db_version = min_version == UINT32_MAX ? 0 : min_version;
    hb.emitter = "env" + std::to_string(node);
    hb.locks = {class_lock("lymph")};
    hb.initial_hops = hops_to_nearest_lymph(node);
    hb.time_to_live = hb.initial_hops + scenario_.params.substance_ttl_slack;
    emit_substance(node, std::move(hb));
}

void Simulation::emit_level_beacon(NodeId node) {
    SubstanceBody beacon;
    beacon.type = MessageType::attraction_beacon;
    beacon.focus = node;
    beacon.strength = scenario_.params.beacon_strength;
    beacon.emitter = "env" + std::to_string(node);
    beacon.locks = {class_lock("env")};
    beacon.initial_hops = scenario_.params.beacon_radius;
    beacon.time_to_live = beacon.initial_hops + scenario_.params.substance_ttl_slack;
    emit_substance(node, std::move(beacon));
}

void Simulation::emit_repair_beacon(NodeId node) {
    SubstanceBody beacon;
    beacon.type = MessageType::attraction_beacon;
    beacon.focus = node;
    beacon.strength = scenario_.params.repair_beacon_strength;
    beacon.emitter = "env" + std::to_string(node);
    beacon.locks = {class_lock("env")};
    beacon.initial_hops = scenario_.params.repair_beacon_radius;
    beacon.time_to_live = beacon.initial_hops + scenario_.params.substance_ttl_slack;
    emit_substance(node, std::move(beacon));
}

void Simulation::end_of_tick_accounting() {
    const std::uint32_t infected = infection_.infected_count();
    metrics_.infected_series.push_back(infected);
    metrics_.quarantined_series.push_back(infection_.quarantined_count());
    metrics_.peak_infected = std::max(metrics_.peak_infected, infected);
    metrics_.final_infected = infected;

    double min_level = 1.0;
    std::uint32_t covered = 0;
    for (NodeId n = 0; n < topo_.node_count(); ++n) {
        min_level = std::min(min_level, mgmt_[n].level);
        if (mgmt_[n].level >= scenario_.params.security_threshold) ++covered;
    }
    metrics_.min_level_series.push_back(min_level);
    metrics_.covered_fraction_series.push_back(static_cast<double>(covered) /
                                               topo_.node_count());

    metrics_.population_series.push_back(static_cast<std::uint32_t>(cell_location_.size()));
    metrics_.roaming_series.push_back(static_cast<std::uint32_t>(roaming_count()));

    std::map<std::string, std::uint64_t> by_type;
    for (const auto& [id, node] : cell_location_) {
        const auto* cell = dynamic_cast<const ArtificialCell*>(envs_[node]->find(id));
        if (cell) ++by_type[cell->template_name()];
    }
    trace_.population(clock_, "total", cell_location_.size());
    for (const auto& [type, count] : by_type) {
        trace_.population(clock_, type.c_str(), count);
    }
}

// -------------------------------------------------------------- inspection

std::vector<CellId> Simulation::live_cell_ids() const {
    std::vector<CellId> ids;
    ids.reserve(cell_location_.size());
    for (const auto& [id, node] : cell_location_) {
        ids.push_back(id);
    }
    return ids;
}

std::optional<NodeId> Simulation::cell_location(CellId id) const {
    auto it = cell_location_.find(id);
    if (it == cell_location_.end()) return std::nullopt;
    return it->second;
}

const ArtificialCell* Simulation::cell(CellId id) const {
    auto it = cell_location_.find(id);
    if (it == cell_location_.end()) return nullptr;
    return dynamic_cast<const ArtificialCell*>(envs_[it->second]->find(id));
}

std::uint64_t Simulation::roaming_count() const {
    std::uint64_t roaming = 0;
    for (const auto& [id, node] : cell_location_) {
        const auto* cell = dynamic_cast<const ArtificialCell*>(envs_[node]->find(id));
        if (cell && cell->mobility() == MobilityState::roaming) ++roaming;
    }
    return roaming;
}

std::vector<NodeId> Simulation::processed_nodes(SubstanceId id) const {
    std::vector<NodeId> nodes;
    for (NodeId n = 0; n < topo_.node_count(); ++n) {
        if (fabric_.visited(id, n)) {
            nodes.push_back(n);
        }
    }
    return nodes;
}

bool Simulation::kill_cell(CellId id) {
    if (!cell_location_.count(id)) return false;
    remove_cell(id, /*report_death=*/false);
    return true;
}

bool Simulation::disable_station(NodeId host, ComponentKind kind) {
    for (Component* comp : envs_[host]->all_components()) {
        if (comp->kind() == kind && comp->active()) {
            comp->set_active(false);
            trace_.event(clock_, "station_down", host, comp->label());
            return true;
        }
    }
    return false;
}

CntsStation* Simulation::cnts_station(std::size_t index) const {
    if (index >= cnts_ids_.size()) return nullptr;
    const NodeId host = classic_home_.at(cnts_ids_[index]);
    return dynamic_cast<CntsStation*>(
        const_cast<SecurityEnvironment&>(*envs_[host]).find(cnts_ids_[index]));
}

CntsStation::Snapshot Simulation::cnts_snapshot(std::size_t index) const {
    CntsStation* station = cnts_station(index);
    if (!station) return {};
    return station->snapshot(initial_population_);
}

std::vector<std::pair<std::string, Verdict>> Simulation::dispatch_packet(NodeId node,
                                                                         const Packet& packet) {
    std::vector<std::pair<std::string, Verdict>> verdicts;
    run_dispatch(node, EnvEventKind::packet, &packet, kNoSig, &verdicts);
    return verdicts;
}

std::vector<std::pair<std::string, Verdict>> Simulation::dispatch_file(NodeId node, SigId sig) {
    std::vector<std::pair<std::string, Verdict>> verdicts;
    run_dispatch(node, EnvEventKind::file_access, nullptr, sig, &verdicts);
    return verdicts;
}

std::string Simulation::report_json() const {
    json j;
    j["scenario"] = scenario_.name;
    j["mode"] = to_string(mode_);
    j["seed"] = master_seed_;
    j["duration"] = scenario_.duration;
    j["nodes"] = topo_.node_count();
    j["final_tick"] = clock_;

    j["infection"] = json{{"final_infected", metrics_.final_infected},
                          {"peak_infected", metrics_.peak_infected},
                          {"infections_total", metrics_.infections_total},
                          {"disinfections", metrics_.disinfections},
                          {"quarantines", metrics_.quarantines},
                          {"final_quarantined", infection_.quarantined_count()}};

    j["traffic"] = json{{"sent", metrics_.packets_sent},
                        {"delivered", metrics_.packets_delivered},
                        {"dropped", metrics_.packets_dropped},
                        {"unroutable", metrics_.packets_unroutable},
                        {"packet_hops", metrics_.packet_hops},
                        {"packet_arrivals", metrics_.packet_arrivals}};

    const double plane_total =
        static_cast<double>(metrics_.packet_hops + metrics_.substance_hops);
    j["protection_plane"] =
        json{{"substances_emitted", metrics_.substances_emitted},
             {"substance_hops", metrics_.substance_hops},
             {"traffic_share",
              plane_total > 0 ? metrics_.substance_hops / plane_total : 0.0}};

    const double arrivals = std::max<std::uint64_t>(1, metrics_.packet_arrivals);
    j["inspection"] = json{{"inspections", metrics_.inspections},
                           {"inspections_per_arrival", metrics_.inspections / arrivals},
                           {"checks_performed", metrics_.checks_performed},
                           {"checks_redundant", metrics_.checks_redundant},
                           {"redundant_per_arrival", metrics_.checks_redundant / arrivals}};

    json latency = json::object();
    for (const auto& [family, at] : metrics_.family_introduced_at) {
        auto it = metrics_.family_first_alert.find(family);
        if (it != metrics_.family_first_alert.end()) {
            const auto alert_at = it->second;
            latency[sigs_.family_name(family)] =
                alert_at >= at ? static_cast<std::int64_t>(alert_at - at) : 0;
        } else {
            latency[sigs_.family_name(family)] = -1; // never detected
        }
    }
    j["alerts"] = json{{"total", metrics_.alerts_total},
                       {"family_match", metrics_.family_match_alerts},
                       {"mutant_packets_sent", metrics_.mutant_packets_sent},
                       {"mutant_alerts", metrics_.mutant_alerts},
                       {"detection_latency", latency}};

    j["administration"] = json{{"admin_feed_lines", metrics_.admin_lines},
                               {"unread_local_log_lines", metrics_.local_log_lines}};

    const double samples = std::max<std::uint64_t>(1, metrics_.staleness_samples);
    j["maintenance"] = json{{"mean_staleness", metrics_.staleness_total_lag / samples},
                            {"staleness_samples", metrics_.staleness_samples}};

    double covered_final = metrics_.covered_fraction_series.empty()
                               ? 0.0
                               : metrics_.covered_fraction_series.back();
    double covered_mean = 0.0;
    for (double f : metrics_.covered_fraction_series) covered_mean += f;
    if (!metrics_.covered_fraction_series.empty()) {
        covered_mean /= metrics_.covered_fraction_series.size();
    }
    j["self_management"] = json{
        {"final_covered_fraction", covered_final},
        {"mean_covered_fraction", covered_mean},
        {"final_min_level",
         metrics_.min_level_series.empty() ? 0.0 : metrics_.min_level_series.back()}};

    j["population"] = json{{"final", cell_location_.size()},
                           {"minted", metrics_.cells_minted},
                           {"expired", metrics_.cells_expired},
                           {"roaming_final", roaming_count()}};

    const double mutant_sent = std::max<std::uint64_t>(1, metrics_.mutant_packets_sent);
    j["criteria_scorecard"] =
        json{{"completeness_covered_fraction", covered_final},
             {"efficiency_inspections_per_arrival", metrics_.inspections / arrivals},
             {"efficiency_redundant_per_arrival", metrics_.checks_redundant / arrivals},
             {"noninterference_protection_share",
              plane_total > 0 ? metrics_.substance_hops / plane_total : 0.0},
             {"maintainability_mean_staleness", metrics_.staleness_total_lag / samples},
             {"maintainability_unread_logs", metrics_.local_log_lines},
             {"adaptivity_mutant_alerts_per_mutant_packet",
              metrics_.mutant_alerts / mutant_sent}};

    return j.dump(2);
}

} // namespace sana
