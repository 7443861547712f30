#include <doctest.h>

#include <deque>
#include <map>
#include <memory>
#include <set>
#include <vector>

#include "core/rng.hpp"
#include "core/errors.hpp"
#include "core/sim.hpp"
#include "core/stations.hpp"
#include "test_helpers.hpp"

using namespace sana;
using sana::testing::explicit_scenario;
using sana::testing::line_scenario;

namespace {

Scenario sana_line(std::uint32_t nodes, Tick duration) {
    auto s = line_scenario(nodes, duration);
    s.mode = Mode::sana;
    return s;
}

SubstanceBody basic_body(Simulation& sim, std::uint32_t hops, std::uint32_t ttl) {
    SubstanceBody body;
    body.type = MessageType::status_report;
    body.detail = "test";
    body.emitter = "test";
    body.locks = {sim.class_lock("lymph")};
    body.initial_hops = hops;
    body.time_to_live = ttl;
    return body;
}

// restricted-BFS ball: nodes within min(hops, ttl) over the forward sets
std::set<NodeId> diffusion_oracle(const Simulation& sim, NodeId origin, std::uint32_t hops,
                                  std::uint32_t ttl) {
    const auto& fabric = const_cast<Simulation&>(sim).fabric();
    const std::uint32_t radius = std::min(hops, ttl);
    std::set<NodeId> seen{origin};
    std::deque<std::pair<NodeId, std::uint32_t>> frontier{{origin, 0}};
    while (!frontier.empty()) {
        auto [n, d] = frontier.front();
        frontier.pop_front();
        if (d == radius) continue;
        for (NodeId m : fabric.forward_set(n)) {
            if (seen.insert(m).second) {
                frontier.emplace_back(m, d + 1);
            }
        }
    }
    return seen;
}

std::set<NodeId> run_and_collect(Simulation& sim, NodeId origin, std::uint32_t hops,
                                 std::uint32_t ttl, Tick settle = 30) {
    auto id = sim.inject_substance(origin, basic_body(sim, hops, ttl));
    for (Tick t = 0; t < settle; ++t) sim.step();
    auto nodes = sim.processed_nodes(id);
    return {nodes.begin(), nodes.end()};
}

} // namespace

TEST_CASE("emit: zero hops is local delivery only") {
    Simulation sim(sana_line(3, 40));
    auto covered = run_and_collect(sim, 1, 0, 4);
    CHECK(covered == std::set<NodeId>{1});
}

TEST_CASE("emit: one hop from the middle of a line reaches both neighbors") {
    Simulation sim(sana_line(3, 40));
    auto covered = run_and_collect(sim, 1, 1, 5);
    CHECK(covered == std::set<NodeId>{0, 1, 2});
}

TEST_CASE("emit: zero time-to-live trumps a generous hop budget") {
    Simulation sim(sana_line(5, 40));
    auto covered = run_and_collect(sim, 2, 5, 0);
    CHECK(covered == std::set<NodeId>{2});
    // the forwarded copies expired, visibly
    bool expired = false;
    for (const auto& line : sim.trace().substances()) {
        if (line.find("expire") != std::string::npos) expired = true;
    }
    CHECK(expired);
}

TEST_CASE("emit: unminted locks are rejected") {
    Simulation sim(sana_line(3, 10));
    SubstanceBody body = basic_body(sim, 1, 4);
    body.locks = {ReceptorLock{987654}};
    CHECK_THROWS_AS(sim.inject_substance(1, std::move(body)), UnmintedLock);

    SubstanceBody empty = basic_body(sim, 1, 4);
    empty.locks.clear();
    CHECK_THROWS_AS(sim.inject_substance(1, std::move(empty)), UnmintedLock);
}

TEST_CASE("forward: star center reaches every leaf exactly once") {
    auto scenario = explicit_scenario(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}}, 40);
    scenario.mode = Mode::sana;
    Simulation sim(scenario);
    auto covered = run_and_collect(sim, 0, 2, 8);
    CHECK(covered == std::set<NodeId>{0, 1, 2, 3, 4});
}

TEST_CASE("forward: cycles are cut by duplicate suppression") {
    auto scenario = explicit_scenario(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}, 40);
    scenario.mode = Mode::sana;
    Simulation sim(scenario);
    auto id = sim.inject_substance(0, basic_body(sim, 3, 9));
    for (Tick t = 0; t < 20; ++t) sim.step();
    CHECK(sim.processed_nodes(id).size() == 4);

    // at most one deliver/locked row per node for this substance
    std::map<NodeId, int> processed;
    for (const auto& line : sim.trace().substances()) {
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        const auto c3 = line.find(',', c2 + 1);
        if (std::stoull(line.substr(c1 + 1, c2 - c1 - 1)) != id) continue;
        const std::string action = line.substr(c3 + 1);
        if (action == "deliver" || action == "locked") {
            processed[std::stoul(line.substr(c2 + 1, c3 - c2 - 1))] += 1;
        }
    }
    for (auto& [node, count] : processed) {
        CHECK(count == 1);
    }
}

TEST_CASE("forward: pruned forward sets restrict the coverage ball") {
    Simulation sim(sana_line(5, 40));
    // node 1 refuses to forward toward node 2
    sim.fabric().set_forward_set(1, {0});
    auto covered = run_and_collect(sim, 0, 4, 9);
    auto want = diffusion_oracle(sim, 0, 4, 9);
    CHECK(covered == want);
    CHECK(covered == std::set<NodeId>{0, 1}); // 2+ unreachable via 1
}

TEST_CASE("forward: random topologies match the restricted-BFS oracle") {
    Rng gen(909090);
    for (int round = 0; round < 25; ++round) {
        Scenario scenario;
        scenario.name = "diffusion";
        scenario.topo_kind = "random_tree_plus";
        scenario.nodes = 12 + static_cast<std::uint32_t>(gen.below(10));
        scenario.extra_edges = static_cast<std::uint32_t>(gen.below(6));
        scenario.topo_seed = gen.u64();
        scenario.auto_switches = 0;
        scenario.duration = 40;
        scenario.mode = Mode::sana;
        scenario.activity_period = 0;
        Simulation sim(scenario);

        // random pruning of forward sets, keeping determinism
        for (NodeId n = 0; n < scenario.nodes; ++n) {
            std::vector<NodeId> keep;
            for (NodeId m : sim.topology().neighbors(n)) {
                if (gen.chance(0.85)) keep.push_back(m);
            }
            sim.fabric().set_forward_set(n, keep);
        }

        const auto origin = static_cast<NodeId>(gen.below(scenario.nodes));
        const auto hops = static_cast<std::uint32_t>(gen.below(6));
        const auto ttl = static_cast<std::uint32_t>(gen.below(8));
        auto covered = run_and_collect(sim, origin, hops, ttl);
        auto want = diffusion_oracle(sim, origin, hops, ttl);
        CHECK(covered == want);
    }
}

TEST_CASE("deliver: any-match over lock/key subsets") {
    Simulation sim(sana_line(3, 10));
    auto& registry = sim.receptor_registry();
    auto p1 = registry.mint("a", "x");
    auto p2 = registry.mint("b", "y");

    SubstanceBody body;
    body.locks = {p1.lock, p2.lock};

    // enumerate all four key subsets against the any-match truth table
    CHECK_FALSE(can_read(body, {}));
    CHECK(can_read(body, {p1.key}));
    CHECK(can_read(body, {p2.key}));
    CHECK(can_read(body, {p1.key, p2.key}));

    // and a key from a different mint never opens them
    auto stranger = registry.mint("c", "z");
    CHECK_FALSE(can_read(body, {stranger.key}));
}

TEST_CASE("deliver: components without matching keys never see payloads") {
    auto scenario = sana_line(4, 60);
    scenario.background_rate = 0.0;
    Simulation sim(scenario);

    struct Counter : Component {
        int* calls;
        Counter(ComponentId id, int* c)
            : Component(id, ComponentKind::ids, "blind", 0.1), calls(c) {}
        Verdict on_substance(DispatchContext&, const SubstanceBody&) override {
            ++*calls;
            return Verdict::pass;
        }
    };
    int calls = 0;
    sim.env(1).register_component(std::make_unique<Counter>(950, &calls), {});

    for (int i = 0; i < 5; ++i) {
        sim.inject_substance(1, basic_body(sim, 2, 6));
        sim.step();
    }
    CHECK(calls == 0);

    bool saw_locked = false;
    for (const auto& line : sim.trace().substances()) {
        if (line.find("locked") != std::string::npos) saw_locked = true;
    }
    (void)saw_locked; // lymph at node 0 reads them; locked rows depend on topology
}

TEST_CASE("lymph: quarantine request triggers an administrator entry") {
    auto scenario = sana_line(4, 40);
    Simulation sim(scenario);
    SubstanceBody req;
    req.type = MessageType::quarantine_request;
    req.implicated = 3;
    req.emitter = "test";
    req.locks = {sim.class_lock("lymph")};
    req.initial_hops = 4;
    req.time_to_live = 8;
    sim.inject_substance(0, std::move(req)); // lymph lives at node 0
    for (int i = 0; i < 4; ++i) sim.step();

    CHECK(sim.quarantined(3));
    bool admin_knows = false;
    for (const auto& line : sim.trace().admin_feed()) {
        if (line.find("node 3") != std::string::npos &&
            line.find("quarantined") != std::string::npos) {
            admin_knows = true;
        }
    }
    CHECK(admin_knows);
}

TEST_CASE("lymph: sustained family alert flood releases matching cells") {
    auto scenario = sana_line(4, 60);
    scenario.params.release_threshold = 3;
    scenario.params.release_window = 20;
    CellSpec matcher;
    matcher.type = "matcher";
    matcher.sig = "F1";
    matcher.count = 0;
    matcher.lifetime = {200, 300};
    scenario.cell_catalog = {matcher};
    scenario.cnts_rate = 0.0;
    Simulation sim(scenario);

    REQUIRE(sim.population() == 0);
    const SigId f1 = sim.signature_registry().by_name("F1");

    auto emit_alert = [&](ComponentId source) {
        SubstanceBody alert;
        alert.type = MessageType::alert;
        alert.alert_kind = AlertKind::sig_exact;
        alert.sig = f1;
        alert.family = sim.signatures().family_of(f1);
        alert.implicated = 2;
        alert.source = source;
        alert.emitter = "test";
        alert.locks = {sim.class_lock("lymph")};
        alert.initial_hops = 4;
        alert.time_to_live = 8;
        sim.inject_substance(0, std::move(alert));
    };

    // windowed-count oracle: release trips at the third alert, not before
    emit_alert(1);
    sim.step();
    emit_alert(2);
    sim.step();
    CHECK(sim.population() == 0);
    emit_alert(3);
    sim.step();
    sim.step();
    CHECK(sim.population() == 2); // lymph released a pair of matchers
}

TEST_CASE("lymph: status reports are cached") {
    auto scenario = sana_line(4, 80);
    scenario.params.heartbeat_period = 10;
    Simulation sim(scenario);
    for (int i = 0; i < 15; ++i) sim.step();

    LymphStation* lymph = nullptr;
    for (Component* c : sim.env(0).all_components()) {
        if (c->kind() == ComponentKind::lymph_node) lymph = dynamic_cast<LymphStation*>(c);
    }
    REQUIRE(lymph);
    CHECK(lymph->status_cache().size() > 0);
}

TEST_CASE("cnts: zero rate mints nothing, fractional rates accumulate exactly") {
    auto scenario = sana_line(3, 4);
    CellSpec matcher;
    matcher.type = "matcher";
    matcher.sig = "W0";
    matcher.count = 0;
    matcher.lifetime = {100, 150};
    scenario.cell_catalog = {matcher};

    SUBCASE("rate zero") {
        scenario.cnts_rate = 0.0;
        Simulation sim(scenario);
        sim.run();
        CHECK(sim.population() == 0);
    }
    SUBCASE("rate 2.5 over 4 ticks mints exactly 10") {
        scenario.cnts_rate = 2.5;
        scenario.cnts_hosts = {0}; // single station
        Simulation sim(scenario);
        sim.run();
        CHECK(sim.population() == 10);
        CHECK(sim.metrics().cells_minted == 10);
    }
}

TEST_CASE("cnts: reweight formula matches the hand oracle") {
    // base mix 0.5/0.3/0.2; alerts 80% family 1, 20% family 2; step 1.0
    std::vector<double> base{0.5, 0.3, 0.2};
    std::vector<FamilyId> families{1, 2, 7};
    std::map<FamilyId, double> share{{1, 0.8}, {2, 0.2}};
    auto w = apply_alert_reweight(base, families, share, 1.0);
    REQUIRE(w.size() == 3);
    CHECK(w[0] == doctest::Approx(0.5 + 0.8));
    CHECK(w[1] == doctest::Approx(0.3 + 0.2));
    CHECK(w[2] == doctest::Approx(0.2));
    // normalized share of family 1 grew
    const double total = w[0] + w[1] + w[2];
    CHECK(w[0] / total > 0.5);
}

TEST_CASE("cnts: fresh network snapshot is all zero except population") {
    auto scenario = sana_line(4, 20);
    CellSpec matcher;
    matcher.type = "matcher";
    matcher.sig = "W0";
    matcher.count = 6;
    matcher.lifetime = {500, 600};
    scenario.cell_catalog = {matcher};
    scenario.cnts_rate = 0.0;
    Simulation sim(scenario);
    sim.run();
    auto snap = sim.cnts_snapshot(0);
    CHECK(snap.infected_known.empty());
    CHECK(snap.alerts_by_family.empty());
    CHECK(snap.stale_nodes.empty());
    CHECK(snap.population_by_type.at("(net_total)") == 6);
}

TEST_CASE("cnts: snapshot infected list has no false members and converges") {
    // worm with matcher coverage; stations learn through forwarded alerts
    Scenario scenario;
    scenario.name = "snapshot";
    scenario.topo_kind = "random_tree_plus";
    scenario.nodes = 25;
    scenario.extra_edges = 6;
    scenario.topo_seed = 99;
    scenario.auto_switches = 4;
    scenario.duration = 160;
    scenario.mode = Mode::sana;
    scenario.seed = 5;
    scenario.activity_period = 4;
    scenario.worms = {WormConfig{"W0", 12, 10, 2, 0.0, {}}};
    CellSpec matcher;
    matcher.type = "matcher";
    matcher.sig = "W0";
    matcher.count = 10;
    matcher.lifetime = {400, 500};
    CellSpec fusion;
    fusion.type = "fusion";
    fusion.count = 4;
    fusion.lifetime = {400, 500};
    CellSpec repair;
    repair.type = "repair";
    repair.repair_families = {"W0"};
    repair.count = 4;
    repair.lifetime = {400, 500};
    scenario.cell_catalog = {matcher, fusion, repair};
    scenario.cnts_rate = 0.3;
    Simulation sim(scenario);

    std::set<NodeId> ever_infected;
    for (Tick t = 0; t < scenario.duration; ++t) {
        sim.step();
        for (NodeId n = 0; n < scenario.nodes; ++n) {
            if (sim.infection().infected(n)) ever_infected.insert(n);
        }
    }

    REQUIRE(sim.cnts_count() == 2);
    auto snap0 = sim.cnts_snapshot(0);
    auto snap1 = sim.cnts_snapshot(1);
    for (NodeId n : snap0.infected_known) {
        CHECK(ever_infected.count(n) == 1); // ground truth, minus cleanups
    }
    // by the quiet end of the run both stations agree
    std::set<NodeId> a(snap0.infected_known.begin(), snap0.infected_known.end());
    std::set<NodeId> b(snap1.infected_known.begin(), snap1.infected_known.end());
    CHECK(a == b);
}
