#ifndef SANA_CORE_SIM_HPP
#define SANA_CORE_SIM_HPP

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "core/adversary.hpp"
#include "core/cells.hpp"
#include "core/components.hpp"
#include "core/event.hpp"
#include "core/metrics.hpp"
#include "core/receptors.hpp"
#include "core/rng.hpp"
#include "core/scenario.hpp"
#include "core/secenv.hpp"
#include "core/selfmgmt.hpp"
#include "core/signatures.hpp"
#include "core/stations.hpp"
#include "core/substances.hpp"
#include "core/topology.hpp"
#include "core/trace.hpp"
#include "core/types.hpp"

namespace sana {

// One deterministic run: discrete clock, event queue, per-node security
// environments, protection components and the adversary, all confined to
// one instance. Distinct simulations are fully independent.
class Simulation final : public EnvServices {
public:
    explicit Simulation(Scenario scenario, std::optional<Mode> mode_override = std::nullopt,
                        std::optional<std::uint64_t> seed_override = std::nullopt,
                        TraceLevel trace_level = TraceLevel::full);
    ~Simulation() override;

    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    // Advances the clock by one tick and executes everything due.
    // Returns the executed events in execution order.
    std::vector<Event> step();
    void run(); // scenario duration

    // --- EnvServices ---
    Tick now() const override { return clock_; }
    Mode mode() const override { return mode_; }
    const Params& params() const override { return scenario_.params; }
    bool warnings_enabled() const override { return scenario_.warnings_enabled; }
    const SignatureRegistry& signatures() const override { return sigs_; }
    SubstanceId emit_substance(NodeId from, SubstanceBody body) override;
    ReceptorLock class_lock(const std::string& tag) const override;
    std::uint32_t hops_to_nearest_lymph(NodeId from) const override;
    std::uint32_t hops_to_nearest_cnts(NodeId from) const override;
    std::uint32_t hop_distance(NodeId a, NodeId b) const override {
        return topo_.distance(a, b);
    }
    std::vector<NodeId> probe_targets(NodeId at) const override;
    ProbeAnswer probe_node(NodeId target) override;
    std::uint32_t server_version() const override { return server_version_; }
    const std::set<SigId>& server_signatures() const override { return server_sigs_; }
    void request_quarantine(NodeId node, const std::string& reason,
                            const std::string& by) override;
    bool node_needs_repair(NodeId node) const override;
    bool try_disinfect(NodeId node, const std::vector<FamilyId>& families,
                       const std::string& by) override;
    void release_cells(NodeId at, FamilyId family, std::uint32_t count,
                       const std::string& by) override;
    void notify_admin(NodeId node, const std::string& text) override;
    void local_log(NodeId node, const std::string& line) override;

    // --- operations exposed to the harness and tests ---
    void schedule(Tick due, EventKind kind, EventPayload payload); // throws PastDue
    void send_packet(Packet packet);                               // throws UnroutablePacket
    SubstanceId inject_substance(NodeId at, SubstanceBody body) {
        return emit_substance(at, std::move(body));
    }
    std::vector<std::pair<std::string, Verdict>> dispatch_packet(NodeId node,
                                                                 const Packet& packet);
    std::vector<std::pair<std::string, Verdict>> dispatch_file(NodeId node, SigId sig);

    // --- introspection ---
    const Scenario& scenario() const { return scenario_; }
    const Topology& topology() const { return topo_; }
    const InfectionState& infection() const { return infection_; }
    const TraceSink& trace() const { return trace_; }
    const MetricsCollector& metrics() const { return metrics_; }
    SecurityEnvironment& env(NodeId n) { return *envs_[n]; }
    SignatureRegistry& signature_registry() { return sigs_; }
    ReceptorRegistry& receptor_registry() { return receptors_; }
    SubstanceFabric& fabric() { return fabric_; }
    Adversary& adversary() { return *adversary_; }

    double node_level(NodeId n) const { return mgmt_[n].level; }
    double node_attraction(NodeId n) const { return mgmt_[n].attraction; }
    bool quarantined(NodeId n) const { return infection_.quarantined[n]; }

    std::vector<CellId> live_cell_ids() const;
    std::optional<NodeId> cell_location(CellId id) const;
    const ArtificialCell* cell(CellId id) const;
    std::uint64_t population() const { return cell_location_.size(); }
    std::uint64_t roaming_count() const;
    std::vector<NodeId> processed_nodes(SubstanceId id) const;

    // Faults, also reachable through scenario injections.
    bool kill_cell(CellId id);                 // silent breakdown, no death record
    bool disable_station(NodeId host, ComponentKind kind); // lymph or cnts

    std::size_t cnts_count() const { return cnts_ids_.size(); }
    CntsStation::Snapshot cnts_snapshot(std::size_t index) const;

    // Finished-run report (also usable mid-run).
    std::string report_json() const;

private:
    Scenario scenario_;
    Mode mode_;
    TraceLevel trace_level_;
    std::uint64_t master_seed_;

    Topology topo_;
    RngStreams rng_;
    Tick clock_ = 0;
    EventQueue queue_;

    SignatureRegistry sigs_;
    ReceptorRegistry receptors_;
    std::map<std::string, ReceptorRegistry::Pair> class_pairs_;

    std::vector<std::unique_ptr<SecurityEnvironment>> envs_;
    SubstanceFabric fabric_;

    std::unique_ptr<Adversary> adversary_;
    InfectionState infection_;
    std::vector<Tick> blackout_until_;

    std::vector<NodeManagement> mgmt_;
    std::vector<Tick> last_repair_beacon_;
    std::vector<QuarantineRecord> quarantine_;

    RuleSet policy_;
    std::set<SigId> server_sigs_;
    std::uint32_t server_version_ = 1;
    std::optional<NodeId> update_server_node_;
    std::map<ComponentId, NodeId> classic_home_; // classic components never move

    // cell bookkeeping
    struct CellTemplate {
        std::string name;
        CellSpec spec;
        SigId rule_sig = kNoSig;
        FamilyId family = 0;
        std::vector<FamilyId> repair_families;
        double base_weight = 0.0;
    };
    std::vector<CellTemplate> templates_;
    std::map<CellId, NodeId> cell_location_;
    std::int64_t initial_population_ = 0;

    std::vector<NodeId> lymph_hosts_;
    std::vector<NodeId> cnts_hosts_;
    std::vector<ComponentId> lymph_ids_;
    std::vector<ComponentId> cnts_ids_;

    MetricsCollector metrics_;
    TraceSink trace_;

    ComponentId next_component_ = 1;
    std::uint64_t packet_seq_ = 1;
    std::set<ComponentId> evicted_ever_;
    bool in_step_ = false; // quiescent emissions land on the next tick

    // --- construction helpers ---
    Topology build_topology() const;
    void assign_roles(Topology::Spec& spec) const;
    void mint_class_pairs();
    void compile_policy();
    void place_classic_components();
    void place_stations();
    void place_initial_cells();
    void schedule_system_timers();
    void grant_standard_keys(Component& c, const std::vector<std::string>& classes);

    // --- event handlers ---
    void handle_packet_arrival(PacketArrival& pa);
    void handle_substance_arrival(const SubstanceArrival& sa);
    void handle_file_access(const FileAccessEvent& fe);
    void handle_timer(const TimerFire& tf);
    void handle_migration_phase();
    void handle_cell_expiry(const CellExpiry& ce);
    void handle_cnts_generation(const CntsGeneration& cg);

    void adversary_tick();
    void self_management_tick();
    void env_check_tick(NodeId node);
    void apply_injection(const InjectionConfig& inj);

    // --- internals ---
    ArtificialCell* mint_cell(std::size_t template_index, NodeId at, Rng& rng,
                              const std::string& minted_by);
    void register_cell(std::unique_ptr<ArtificialCell> cell, NodeId at);
    void remove_cell(CellId id, bool report_death);
    double level_of(NodeId node, CellId excluding, bool skip_near_expiry) const;
    void recompute_level(NodeId node);
    void infect(NodeId node, SigId sig, const char* how);
    void emit_heartbeat(NodeId node);
    void emit_level_beacon(NodeId node);
    void emit_repair_beacon(NodeId node);
    void end_of_tick_accounting();

    struct DispatchOutcome {
        bool dropped = false;
        std::string dropped_by;
        bool sig_detected = false;
    };
    DispatchOutcome run_dispatch(NodeId node, EnvEventKind kind, const Packet* packet,
                                 SigId file_sig,
                                 std::vector<std::pair<std::string, Verdict>>* out);
    CntsStation* cnts_station(std::size_t index) const;
};

} // namespace sana

#endif
