#include <doctest.h>

#include <memory>
#include <string>
#include <vector>

#include "core/errors.hpp"
#include "core/secenv.hpp"
#include "core/sim.hpp"
#include "test_helpers.hpp"

using namespace sana;
using sana::testing::line_scenario;

namespace {

// Minimal scripted component for dispatch-order and misbehavior tests.
class ScriptedComponent : public Component {
public:
    ScriptedComponent(ComponentId id, std::string label, double security_value,
                      Verdict packet_verdict, std::vector<std::string>* log)
        : Component(id, ComponentKind::ids, std::move(label), security_value),
          packet_verdict_(packet_verdict), log_(log) {}

    Verdict on_packet(DispatchContext&, const Packet&) override {
        if (log_) log_->push_back(label());
        return packet_verdict_;
    }

private:
    Verdict packet_verdict_;
    std::vector<std::string>* log_;
};

Scenario sana_scenario(std::uint32_t nodes, Tick duration) {
    auto s = line_scenario(nodes, duration);
    s.mode = Mode::sana;
    return s;
}

} // namespace

TEST_CASE("register: duplicate registration is rejected") {
    Simulation sim(line_scenario(3));
    auto& env = sim.env(1);
    env.register_component(
        std::make_unique<ScriptedComponent>(900, "fw_t", 0.3, Verdict::pass, nullptr),
        {EnvEventKind::packet});
    CHECK(env.registered(900));
    CHECK_THROWS_AS(env.register_component(std::make_unique<ScriptedComponent>(
                                               900, "fw_t", 0.3, Verdict::pass, nullptr),
                                           {EnvEventKind::packet}),
                    DuplicateRegistration);
}

TEST_CASE("dispatch: subscribers run in registration order") {
    Simulation sim(line_scenario(3));
    auto& env = sim.env(1);
    std::vector<std::string> log;
    env.register_component(
        std::make_unique<ScriptedComponent>(901, "F", 0.3, Verdict::pass, &log),
        {EnvEventKind::packet});
    env.register_component(
        std::make_unique<ScriptedComponent>(902, "I", 0.3, Verdict::pass, &log),
        {EnvEventKind::packet});
    env.register_component(
        std::make_unique<ScriptedComponent>(903, "C", 0.3, Verdict::pass, &log),
        {EnvEventKind::packet});

    Packet p;
    p.packet_id = 1;
    p.src = 0;
    p.dst = 1;
    auto verdicts = sim.dispatch_packet(1, p);
    REQUIRE(verdicts.size() == 3);
    CHECK(log == std::vector<std::string>{"F", "I", "C"});
    CHECK(verdicts[0].first == "F");
    CHECK(verdicts[2].first == "C");
}

TEST_CASE("dispatch: first drop stops the chain") {
    Simulation sim(line_scenario(3));
    auto& env = sim.env(1);
    std::vector<std::string> log;
    env.register_component(
        std::make_unique<ScriptedComponent>(904, "filter", 0.3, Verdict::drop, &log),
        {EnvEventKind::packet});
    env.register_component(
        std::make_unique<ScriptedComponent>(905, "ids", 0.3, Verdict::pass, &log),
        {EnvEventKind::packet});

    Packet p;
    p.packet_id = 2;
    p.src = 0;
    p.dst = 1;
    auto verdicts = sim.dispatch_packet(1, p);
    REQUIRE(verdicts.size() == 1);
    CHECK(verdicts[0] == std::pair<std::string, Verdict>{"filter", Verdict::drop});
    CHECK(log == std::vector<std::string>{"filter"}); // ids never saw it
}

TEST_CASE("dispatch: a dropping filter stops packet forwarding") {
    auto scenario = line_scenario(3, 10);
    Simulation sim(scenario);
    sim.env(1).register_component(
        std::make_unique<ScriptedComponent>(906, "filter", 0.3, Verdict::drop, nullptr),
        {EnvEventKind::packet});
    Packet p;
    p.src = 0;
    p.dst = 2;
    sim.send_packet(p);
    sim.run();
    CHECK(sim.metrics().packets_dropped == 1);
    CHECK(sim.metrics().packets_delivered == 0);
}

TEST_CASE("check_component: valid receptors pass") {
    Simulation sim(sana_scenario(3, 10));
    auto comps = sim.env(0).all_components();
    for (Component* c : comps) {
        CHECK(sim.env(0).check_component(1, *c));
    }
}

TEST_CASE("check_component: stolen key fails authentication and leads to eviction") {
    Simulation sim(sana_scenario(3, 10));
    auto& env = sim.env(1);

    // mint a pair granted to someone else, then present it as our own
    auto pair = sim.receptor_registry().mint("ids", "identity");
    sim.receptor_registry().grant(pair.key, 999);
    auto rogue = std::make_unique<ScriptedComponent>(907, "rogue", 0.3, Verdict::pass, nullptr);
    rogue->add_key(pair.key);
    env.register_component(std::move(rogue), {EnvEventKind::packet});

    CHECK_FALSE(env.check_component(1, *env.find(907)));
    CHECK(env.has_violation(907));
    env.evict(2, 907);
    CHECK_FALSE(env.registered(907));
}

TEST_CASE("check_component: unauthorized resource access is a violation") {
    Simulation sim(sana_scenario(3, 10));
    auto& env = sim.env(1);
    env.register_component(
        std::make_unique<ScriptedComponent>(908, "greedy", 0.3, Verdict::pass, nullptr),
        {EnvEventKind::packet});
    // no network key was granted
    CHECK_FALSE(env.access_resource(1, 908, Resource::network));
    REQUIRE(env.has_violation(908));
    CHECK(env.violations().back().kind == ViolationKind::unauthorized_resource);
}

TEST_CASE("check_component: exceeding the per-tick action budget is a violation") {
    Simulation sim(sana_scenario(3, 10));
    auto& env = sim.env(1);
    env.register_component(
        std::make_unique<ScriptedComponent>(909, "noisy", 0.3, Verdict::pass, nullptr),
        {EnvEventKind::packet});
    const std::uint32_t budget = sim.scenario().params.action_budget;
    // oracle: the counter flips exactly when spending crosses the budget
    for (std::uint32_t spent = 1; spent <= 2 * budget; ++spent) {
        const bool ok = env.spend_action(3, 909, 1, budget);
        CHECK(ok == (spent <= budget));
    }
    REQUIRE(env.has_violation(909));
    CHECK(env.violations().back().kind == ViolationKind::budget_exceeded);
}

TEST_CASE("evict: without a violation on record there is nothing to evict") {
    Simulation sim(sana_scenario(3, 10));
    auto& env = sim.env(1);
    env.register_component(
        std::make_unique<ScriptedComponent>(910, "fine", 0.3, Verdict::pass, nullptr),
        {EnvEventKind::packet});
    CHECK_THROWS_AS(env.evict(1, 910), NoViolationOnRecord);
}

TEST_CASE("evict: component receives no further events anywhere") {
    Simulation sim(sana_scenario(4, 30));
    auto& env = sim.env(2);
    std::vector<std::string> log;
    env.register_component(
        std::make_unique<ScriptedComponent>(911, "victim", 0.3, Verdict::pass, &log),
        {EnvEventKind::packet});

    Packet p;
    p.packet_id = 51;
    p.src = 0;
    p.dst = 2;
    sim.dispatch_packet(2, p);
    CHECK(log.size() == 1);

    env.access_resource(1, 911, Resource::network); // logs the violation
    env.evict(1, 911);
    const std::size_t audits_at_eviction = sim.trace().audits().size();
    sim.dispatch_packet(2, p);
    CHECK(log.size() == 1); // unchanged

    // audit trace never mentions the evicted label again
    sim.run();
    for (std::size_t i = audits_at_eviction; i < sim.trace().audits().size(); ++i) {
        CHECK(sim.trace().audits()[i].find("victim") == std::string::npos);
    }
}

TEST_CASE("evict: losing a detector lowers the node security level") {
    Simulation sim(sana_scenario(3, 10));
    auto& env = sim.env(1);
    env.register_component(
        std::make_unique<ScriptedComponent>(912, "det", 0.3, Verdict::pass, nullptr),
        {EnvEventKind::packet});
    sim.step();
    // direct arithmetic: host stack av 0.4 + fw 0.3 + detector 0.3
    const double with_det = 1.0 - 0.6 * 0.7 * 0.7;
    const double without_det = 1.0 - 0.6 * 0.7;
    const double before = sim.node_level(1);
    CHECK(before == doctest::Approx(with_det));

    env.access_resource(sim.now(), 912, Resource::network);
    env.evict(sim.now(), 912);
    sim.step();
    const double after = sim.node_level(1);
    CHECK(after == doctest::Approx(without_det));
    CHECK(after < before);
}

TEST_CASE("budget: denied actions show up in the audit trail during a run") {
    auto scenario = sana_scenario(3, 5);
    scenario.params.action_budget = 2;
    scenario.background_rate = 6.0; // every packet charges resident components
    Simulation sim(scenario);
    sim.env(1).register_component(
        std::make_unique<ScriptedComponent>(913, "busy", 0.3, Verdict::pass, nullptr),
        {EnvEventKind::packet});
    sim.run();
    bool denied = false;
    for (const auto& line : sim.trace().audits()) {
        if (line.find("denied") != std::string::npos) denied = true;
    }
    CHECK(denied);
}
