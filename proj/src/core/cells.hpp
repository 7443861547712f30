#ifndef SANA_CORE_CELLS_HPP
#define SANA_CORE_CELLS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/rng.hpp"
#include "core/secenv.hpp"
#include "core/signatures.hpp"
#include "core/types.hpp"

namespace sana {

enum class CellType : std::uint8_t { matcher, fusion, prober, repair };

const char* to_string(CellType type);
CellType cell_type_from_string(const std::string& s);

enum class MobilityState : std::uint8_t { roaming, anchored };

struct AlertObservation {
    Tick tick = 0;
    NodeId implicated = kNoNode;
    FamilyId family = 0;
    ComponentId source = 0;
};

// ---- pure cell logic, shared by the components and their tests ----

struct MatchResult {
    SigId sig = kNoSig;
    AlertKind kind = AlertKind::sig_exact;
};

// One-rule pattern check: exact hit on the rule signature, or any same-
// family signature once the danger level reaches the family threshold.
std::optional<MatchResult> matcher_match(SigId rule_sig, FamilyId rule_family,
                                         double danger_level, double theta_d,
                                         const std::vector<SigId>& sigs,
                                         const SignatureRegistry& registry);

// Nodes implicated by at least `theta` distinct alert sources within the
// window (tick > now - window). Returned sorted ascending.
std::vector<NodeId> fusion_infected_nodes(const std::vector<AlertObservation>& window,
                                          std::uint32_t theta, Tick now,
                                          std::uint32_t window_len);

// Migration draw over {stay, neighbors...}: with probability epsilon the
// choice is uniform, otherwise weighted by (1 + attraction). Index 0 means
// stay. `attraction[i]` belongs to choice i.
std::size_t migration_choice(Rng& rng, double epsilon, const std::vector<double>& attraction);

// k warning-free ticks shrink the danger level to level * decay^k; this is
// the smallest k that brings `level` strictly below `theta`.
std::uint32_t ticks_until_calm(double level, double theta, double decay);

// ---- the mobile agent itself ----

class ArtificialCell : public Component {
public:
    ArtificialCell(ComponentId id, CellType type, std::string label, double security_value,
                   Tick birth, Tick lifetime)
        : Component(id, ComponentKind::artificial_cell, std::move(label), security_value),
          type_(type), birth_(birth), lifetime_(lifetime) {}

    CellType cell_type() const { return type_; }
    Tick birth_tick() const { return birth_; }
    Tick lifetime() const { return lifetime_; }
    Tick expires_at() const { return birth_ + lifetime_; }

    MobilityState mobility() const { return mobility_; }
    void set_mobility(MobilityState m) { mobility_ = m; }
    std::uint32_t calm_streak() const { return calm_streak_; }
    void set_calm_streak(std::uint32_t v) { calm_streak_ = v; }

    double danger_level() const { return danger_; }
    void add_danger(double amount) { danger_ += amount; }
    void decay_danger(double factor) { danger_ *= factor; }

    const std::string& template_name() const { return template_name_; }
    void set_template_name(std::string name) { template_name_ = std::move(name); }

    // matcher program
    SigId rule_sig = kNoSig;
    FamilyId rule_family = 0;
    bool drop_on_match = true;

    // repair program
    std::vector<FamilyId> repair_families;

    // prober knowledge: newest database version seen anywhere
    std::uint32_t known_max_version = 0;

    // fusion state
    std::vector<AlertObservation> alert_window;
    std::map<NodeId, Tick> recently_requested;

    Verdict on_packet(DispatchContext& ctx, const Packet& packet) override;
    Verdict on_file_access(DispatchContext& ctx, SigId sig) override;
    Verdict on_substance(DispatchContext& ctx, const SubstanceBody& body) override;
    void on_timer(DispatchContext& ctx) override;
    std::uint32_t timer_period(const Params& params) const override;

private:
    CellType type_;
    Tick birth_;
    Tick lifetime_;
    MobilityState mobility_ = MobilityState::roaming;
    std::uint32_t calm_streak_ = 0; // consecutive ticks not needed for cover
    double danger_ = 0.0;
    std::string template_name_;

    void emit_match_alert(DispatchContext& ctx, const MatchResult& match, NodeId implicated,
                          bool file_event);
    void fusion_evaluate(DispatchContext& ctx);
    void prober_probe(DispatchContext& ctx);
    void repair_try(DispatchContext& ctx);
};

} // namespace sana

#endif
