#include "core/stations.hpp"

#include <algorithm>

namespace sana {

Verdict LymphStation::on_substance(DispatchContext& ctx, const SubstanceBody& body) {
    EnvServices& sv = ctx.services();
    const Params& p = sv.params();
    const Tick now = sv.now();

    switch (body.type) {
    case MessageType::alert: {
        switch (body.alert_kind) {
        case AlertKind::silent:
            if (!sv.node_needs_repair(body.implicated)) {
                sv.request_quarantine(body.implicated, "silent node", label());
                sv.notify_admin(ctx.node(), "node " + std::to_string(body.implicated) +
                                                " silent, quarantined");
            }
            break;
        case AlertKind::stale:
            sv.notify_admin(ctx.node(), "node " + std::to_string(body.implicated) +
                                            " stale components (" + body.detail + ")");
            break;
        case AlertKind::eviction:
            sv.notify_admin(ctx.node(), "component evicted at node " +
                                            std::to_string(body.implicated) + " (" +
                                            body.detail + ")");
            break;
        case AlertKind::sig_exact:
        case AlertKind::sig_family:
            family_alerts_.emplace_back(now, body.family);
            while (!family_alerts_.empty() &&
                   family_alerts_.front().first + p.release_window < now) {
                family_alerts_.pop_front();
            }
            maybe_release(ctx, body.family);
            break;
        }
        forward_to_cnts(ctx, body);
        return Verdict::consume;
    }
    case MessageType::quarantine_request: {
        if (!sv.node_needs_repair(body.implicated)) {
            sv.request_quarantine(body.implicated, "fusion verdict", label());
            sv.notify_admin(ctx.node(), "node " + std::to_string(body.implicated) +
                                            " flagged infected, quarantined");
            // a matching repair capability should be close by
            sv.release_cells(ctx.node(), body.family, 1, label());
        }
        forward_to_cnts(ctx, body);
        return Verdict::consume;
    }
    case MessageType::status_report: {
        if (body.detail == "heartbeat") {
            status_cache_[body.origin] =
                CachedStatus{now, body.db_version, body.report_level};
            max_version_seen_ = std::max(max_version_seen_, body.db_version);
        } else if (body.detail == "cleaned") {
            sv.notify_admin(ctx.node(), "node " + std::to_string(body.implicated) +
                                            " disinfected");
        }
        return Verdict::consume;
    }
    default:
        return Verdict::pass;
    }
}

void LymphStation::on_timer(DispatchContext& ctx) {
    // share the newest update version with status-probing cells
    if (max_version_seen_ == 0) return;
    EnvServices& sv = ctx.services();
    SubstanceBody info;
    info.type = MessageType::status_report;
    info.detail = "version_info";
    info.db_version = max_version_seen_;
    info.source = id();
    info.emitter = label();
    info.locks = {sv.class_lock("prober")};
    info.initial_hops = sv.params().alert_hops;
    info.time_to_live = info.initial_hops + sv.params().substance_ttl_slack;
    sv.emit_substance(ctx.node(), std::move(info));
}

void LymphStation::forward_to_cnts(DispatchContext& ctx, const SubstanceBody& body) {
    EnvServices& sv = ctx.services();
    SubstanceBody copy = body;
    copy.emitter = label();
    copy.locks = {sv.class_lock("cnts")};
    copy.initial_hops = sv.hops_to_nearest_cnts(ctx.node()) + 1;
    copy.time_to_live = copy.initial_hops + sv.params().substance_ttl_slack;
    sv.emit_substance(ctx.node(), std::move(copy));
}

void LymphStation::maybe_release(DispatchContext& ctx, FamilyId family) {
    EnvServices& sv = ctx.services();
    const Params& p = sv.params();
    const Tick now = sv.now();

    std::uint32_t count = 0;
    for (const auto& [tick, fam] : family_alerts_) {
        if (fam == family) ++count;
    }
    if (count < p.release_threshold) return;
    auto it = last_release_.find(family);
    if (it != last_release_.end() && now - it->second < p.release_window) return;
    last_release_[family] = now;
    sv.release_cells(ctx.node(), family, 2, label());
}

Verdict CntsStation::on_substance(DispatchContext& ctx, const SubstanceBody& body) {
    EnvServices& sv = ctx.services();
    const Tick now = sv.now();
    const std::uint32_t window = sv.params().situation_window;

    switch (body.type) {
    case MessageType::alert:
        if (body.alert_kind == AlertKind::sig_exact || body.alert_kind == AlertKind::sig_family) {
            // raw evidence feeds the alert statistics; only fused verdicts
            // (quarantine requests) mark a node as known infected
            alerts_.emplace_back(now, body.family);
            ++alert_totals_[body.family];
        } else if (body.alert_kind == AlertKind::stale) {
            stale_known_.insert(body.implicated);
        } else if (body.alert_kind == AlertKind::silent) {
            infected_known_.insert(body.implicated);
        }
        while (!alerts_.empty() && alerts_.front().first + window < now) {
            alerts_.pop_front();
        }
        return Verdict::consume;
    case MessageType::quarantine_request:
        if (body.implicated != kNoNode) infected_known_.insert(body.implicated);
        return Verdict::consume;
    case MessageType::death_record:
        ++deaths_by_type_[body.cell_type_tag];
        return Verdict::consume;
    case MessageType::status_report:
        if (body.detail == "cell_mint") {
            ++births_by_type_[body.cell_type_tag];
        } else if (body.detail == "cleaned" && body.implicated != kNoNode) {
            infected_known_.erase(body.implicated);
        }
        return Verdict::consume;
    case MessageType::cell_release:
        // a station covers release requests out of its generation budget
        accumulator_ += body.release_count;
        return Verdict::consume;
    default:
        return Verdict::pass;
    }
}

std::uint32_t CntsStation::whole_cells_due() {
    accumulator_ += rate_;
    auto due = static_cast<std::uint32_t>(accumulator_);
    accumulator_ -= due;
    return due;
}

std::vector<double> apply_alert_reweight(const std::vector<double>& base,
                                         const std::vector<FamilyId>& families,
                                         const std::map<FamilyId, double>& share, double step) {
    std::vector<double> weights(base);
    for (std::size_t i = 0; i < weights.size(); ++i) {
        auto it = share.find(families[i]);
        if (it != share.end()) {
            weights[i] += step * it->second;
        }
    }
    return weights;
}

std::vector<double> CntsStation::adapted_weights(const std::vector<double>& base_weights,
                                                 const std::vector<FamilyId>& template_families,
                                                 double reweight_step, Tick now,
                                                 std::uint32_t window) const {
    std::map<FamilyId, double> share;
    double total = 0;
    for (const auto& [tick, family] : alerts_) {
        if (tick + window >= now) {
            share[family] += 1;
            total += 1;
        }
    }
    if (total > 0) {
        for (auto& [family, v] : share) v /= total;
    }
    return apply_alert_reweight(base_weights, template_families, share, reweight_step);
}

CntsStation::Snapshot CntsStation::snapshot(std::int64_t initial_population) const {
    Snapshot snap;
    std::int64_t net = initial_population;
    for (const auto& [type, n] : births_by_type_) {
        snap.population_by_type[type] += n;
        net += n;
    }
    for (const auto& [type, n] : deaths_by_type_) {
        snap.population_by_type[type] -= n;
        net -= n;
    }
    snap.population_by_type["(net_total)"] = net;
    snap.infected_known.assign(infected_known_.begin(), infected_known_.end());
    snap.stale_nodes.assign(stale_known_.begin(), stale_known_.end());
    for (const auto& [family, n] : alert_totals_) {
        snap.alerts_by_family[family] = n;
    }
    return snap;
}

} // namespace sana
