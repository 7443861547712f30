#ifndef SANA_CORE_STATIONS_HPP
#define SANA_CORE_STATIONS_HPP

#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "core/secenv.hpp"
#include "core/substances.hpp"
#include "core/types.hpp"

namespace sana {

// weight_i = base_i + step * alert_share(family_i); the caller's weighted
// draw does the normalization.
std::vector<double> apply_alert_reweight(const std::vector<double>& base,
                                         const std::vector<FamilyId>& families,
                                         const std::map<FamilyId, double>& share, double step);

// Response station on network equipment: answers substances, caches status
// reports, informs the administrator and releases cells on demand.
class LymphStation : public Component {
public:
    LymphStation(ComponentId id, double security_value)
        : Component(id, ComponentKind::lymph_node, "lymph" + std::to_string(id),
                    security_value) {}

    Verdict on_substance(DispatchContext& ctx, const SubstanceBody& body) override;
    void on_timer(DispatchContext& ctx) override;
    std::uint32_t timer_period(const Params& params) const override {
        return params.heartbeat_period;
    }

    struct CachedStatus {
        Tick tick = 0;
        std::uint32_t db_version = 0;
        double level = 0.0;
    };
    const std::map<NodeId, CachedStatus>& status_cache() const { return status_cache_; }

private:
    std::map<NodeId, CachedStatus> status_cache_;
    std::deque<std::pair<Tick, FamilyId>> family_alerts_; // release-window history
    std::map<FamilyId, Tick> last_release_;
    std::uint32_t max_version_seen_ = 0;

    void forward_to_cnts(DispatchContext& ctx, const SubstanceBody& body);
    void maybe_release(DispatchContext& ctx, FamilyId family);
};

// Cell factory: continuously mints cells from the catalog, weighted toward
// families with recent alert activity, and keeps a substance-derived view
// of the situation for administrator snapshots.
class CntsStation : public Component {
public:
    CntsStation(ComponentId id, double security_value, double rate)
        : Component(id, ComponentKind::cnts, "cnts" + std::to_string(id), security_value),
          rate_(rate) {}

    Verdict on_substance(DispatchContext& ctx, const SubstanceBody& body) override;

    // Called once per tick through the generation event. Fractional rates
    // accumulate; every whole unit mints one cell from the adapted mix.
    std::uint32_t whole_cells_due();

    // Adapted template weights: base + reweight_step * family alert share,
    // then normalized by the caller's weighted draw.
    std::vector<double> adapted_weights(const std::vector<double>& base_weights,
                                        const std::vector<FamilyId>& template_families,
                                        double reweight_step, Tick now,
                                        std::uint32_t window) const;

    void note_mint() { ++mints_; }
    double rate() const { return rate_; }
    void set_rate(double r) { rate_ = r; }

    struct Snapshot {
        std::map<std::string, std::int64_t> population_by_type;
        std::vector<NodeId> infected_known;
        std::map<FamilyId, std::uint64_t> alerts_by_family;
        std::vector<NodeId> stale_nodes;
    };
    Snapshot snapshot(std::int64_t initial_population) const;

    const std::deque<std::pair<Tick, FamilyId>>& situation_alerts() const { return alerts_; }

private:
    double rate_;
    double accumulator_ = 0.0;
    std::uint64_t mints_ = 0;

    std::deque<std::pair<Tick, FamilyId>> alerts_;
    std::map<FamilyId, std::uint64_t> alert_totals_;
    std::set<NodeId> infected_known_;
    std::set<NodeId> stale_known_;
    std::map<std::string, std::int64_t> births_by_type_;
    std::map<std::string, std::int64_t> deaths_by_type_;
};

} // namespace sana

#endif
