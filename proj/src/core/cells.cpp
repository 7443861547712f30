#include "core/cells.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "core/errors.hpp"

namespace sana {

const char* to_string(CellType type) {
    switch (type) {
    case CellType::matcher: return "matcher";
    case CellType::fusion: return "fusion";
    case CellType::prober: return "prober";
    case CellType::repair: return "repair";
    }
    return "?";
}

CellType cell_type_from_string(const std::string& s) {
    if (s == "matcher") return CellType::matcher;
    if (s == "fusion") return CellType::fusion;
    if (s == "prober") return CellType::prober;
    if (s == "repair") return CellType::repair;
    throw SimError("BadCellType", "unknown cell type '" + s + "'");
}

std::optional<MatchResult> matcher_match(SigId rule_sig, FamilyId rule_family,
                                         double danger_level, double theta_d,
                                         const std::vector<SigId>& sigs,
                                         const SignatureRegistry& registry) {
    for (SigId s : sigs) {
        if (s == rule_sig) {
            return MatchResult{s, AlertKind::sig_exact};
        }
    }
    if (danger_level >= theta_d) {
        for (SigId s : sigs) {
            if (registry.known(s) && registry.family_of(s) == rule_family) {
                return MatchResult{s, AlertKind::sig_family};
            }
        }
    }
    return std::nullopt;
}

std::vector<NodeId> fusion_infected_nodes(const std::vector<AlertObservation>& window,
                                          std::uint32_t theta, Tick now,
                                          std::uint32_t window_len) {
    const Tick cutoff = now >= window_len ? now - window_len : 0;
    std::map<NodeId, std::set<ComponentId>> sources;
    for (const auto& obs : window) {
        if (obs.tick <= now && obs.tick >= cutoff && obs.implicated != kNoNode) {
            sources[obs.implicated].insert(obs.source);
        }
    }
    std::vector<NodeId> verdicts;
    for (const auto& [node, who] : sources) {
        if (who.size() >= theta) {
            verdicts.push_back(node);
        }
    }
    return verdicts;
}

std::size_t migration_choice(Rng& rng, double epsilon, const std::vector<double>& attraction) {
    if (attraction.empty()) return 0;
    if (epsilon > 0.0 && rng.chance(epsilon)) {
        return static_cast<std::size_t>(rng.below(attraction.size()));
    }
    std::vector<double> weights(attraction.size());
    for (std::size_t i = 0; i < attraction.size(); ++i) {
        weights[i] = 1.0 + std::max(0.0, attraction[i]);
    }
    return rng.weighted(weights);
}

std::uint32_t ticks_until_calm(double level, double theta, double decay) {
    if (level < theta) return 0;
    // smallest k with level * decay^k < theta
    double k = std::log(theta / level) / std::log(decay);
    auto ticks = static_cast<std::uint32_t>(std::ceil(k));
    // guard against the boundary sitting exactly on an integer
    while (level * std::pow(decay, ticks) >= theta) {
        ++ticks;
    }
    return ticks;
}

std::uint32_t ArtificialCell::timer_period(const Params& params) const {
    switch (type_) {
    case CellType::fusion: return 1;
    case CellType::prober: return params.probe_period;
    case CellType::repair: return 1;
    case CellType::matcher: return 0;
    }
    return 0;
}

Verdict ArtificialCell::on_packet(DispatchContext& ctx, const Packet& packet) {
    if (type_ != CellType::matcher) return Verdict::pass;
    EnvServices& sv = ctx.services();
    const bool danger_armed = danger_ >= sv.params().theta_d;

    // exact part of the check, deduplicated per rule signature
    std::string exact_key = "pat:" + std::to_string(rule_sig);
    bool run_exact = ctx.claim_check(*this, exact_key);
    // family-wide part, only armed matchers perform it
    bool run_family = danger_armed && ctx.claim_check(*this, "fam:" + std::to_string(rule_family));
    if (!run_exact && !run_family) return Verdict::pass;

    auto match = matcher_match(rule_sig, rule_family, danger_armed ? danger_ : 0.0,
                               sv.params().theta_d, packet.payload_sigs, sv.signatures());
    if (!match) return Verdict::pass;
    if (match->kind == AlertKind::sig_exact && !run_exact) return Verdict::pass;
    if (match->kind == AlertKind::sig_family && !run_family) return Verdict::pass;

    emit_match_alert(ctx, *match, packet.src, false);
    ctx.note_sig_detection();
    return drop_on_match ? Verdict::drop : Verdict::alert;
}

Verdict ArtificialCell::on_file_access(DispatchContext& ctx, SigId sig) {
    if (type_ != CellType::matcher) return Verdict::pass;
    EnvServices& sv = ctx.services();
    const bool danger_armed = danger_ >= sv.params().theta_d;

    std::string exact_key = "fpat:" + std::to_string(rule_sig);
    bool run_exact = ctx.claim_check(*this, exact_key);
    bool run_family = danger_armed && ctx.claim_check(*this, "ffam:" + std::to_string(rule_family));
    if (!run_exact && !run_family) return Verdict::pass;

    std::vector<SigId> sigs{sig};
    auto match = matcher_match(rule_sig, rule_family, danger_armed ? danger_ : 0.0,
                               sv.params().theta_d, sigs, sv.signatures());
    if (!match) return Verdict::pass;
    if (match->kind == AlertKind::sig_exact && !run_exact) return Verdict::pass;
    if (match->kind == AlertKind::sig_family && !run_family) return Verdict::pass;

    emit_match_alert(ctx, *match, ctx.node(), true);
    ctx.note_sig_detection();
    return Verdict::alert; // file events are local; nothing to drop
}

Verdict ArtificialCell::on_substance(DispatchContext& ctx, const SubstanceBody& body) {
    EnvServices& sv = ctx.services();
    if (type_ == CellType::matcher && body.type == MessageType::warning) {
        if (sv.warnings_enabled()) {
            danger_ += 1.0;
        }
        return Verdict::consume;
    }
    if (type_ == CellType::fusion && body.type == MessageType::alert) {
        if (body.alert_kind == AlertKind::sig_exact || body.alert_kind == AlertKind::sig_family) {
            alert_window.push_back(
                AlertObservation{sv.now(), body.implicated, body.family, body.source});
        }
        return Verdict::consume;
    }
    if (type_ == CellType::prober && body.type == MessageType::status_report) {
        known_max_version = std::max(known_max_version, body.db_version);
        return Verdict::consume;
    }
    return Verdict::pass;
}

void ArtificialCell::on_timer(DispatchContext& ctx) {
    switch (type_) {
    case CellType::fusion: fusion_evaluate(ctx); break;
    case CellType::prober: prober_probe(ctx); break;
    case CellType::repair: repair_try(ctx); break;
    case CellType::matcher: break;
    }
}

void ArtificialCell::emit_match_alert(DispatchContext& ctx, const MatchResult& match,
                                      NodeId implicated, bool file_event) {
    EnvServices& sv = ctx.services();
    const Params& p = sv.params();
    const FamilyId family = sv.signatures().family_of(match.sig);
    const std::uint32_t generation = sv.signatures().get(match.sig).generation;

    SubstanceBody alert;
    alert.type = MessageType::alert;
    alert.alert_kind = match.kind;
    alert.sig = match.sig;
    alert.family = family;
    alert.generation = generation;
    alert.implicated = implicated;
    alert.source = id();
    alert.emitter = label();
    alert.detail = file_event ? "file" : "packet";
    alert.locks = {sv.class_lock("fusion"), sv.class_lock("lymph"), sv.class_lock("cnts")};
    alert.initial_hops = std::max(p.alert_hops, sv.hops_to_nearest_lymph(ctx.node()));
    alert.time_to_live = alert.initial_hops + p.substance_ttl_slack;
    sv.emit_substance(ctx.node(), std::move(alert));

    if (sv.warnings_enabled()) {
        SubstanceBody warning;
        warning.type = MessageType::warning;
        warning.alert_kind = match.kind;
        warning.sig = match.sig;
        warning.family = family;
        warning.generation = generation;
        warning.implicated = implicated;
        warning.source = id();
        warning.emitter = label();
        warning.locks = {sv.class_lock("matcher")};
        warning.initial_hops = p.warning_radius;
        warning.time_to_live = p.warning_radius + p.substance_ttl_slack;
        sv.emit_substance(ctx.node(), std::move(warning));
    }
}

void ArtificialCell::fusion_evaluate(DispatchContext& ctx) {
    EnvServices& sv = ctx.services();
    const Params& p = sv.params();
    const Tick now = sv.now();

    // trim expired observations
    const Tick cutoff = now >= p.fusion_window ? now - p.fusion_window : 0;
    std::erase_if(alert_window, [cutoff](const AlertObservation& o) { return o.tick < cutoff; });

    for (NodeId node : fusion_infected_nodes(alert_window, p.fusion_theta, now, p.fusion_window)) {
        auto it = recently_requested.find(node);
        if (it != recently_requested.end() && now - it->second < p.fusion_window) {
            continue; // already requested within this window
        }
        recently_requested[node] = now;

        // newest implicating observation supplies the suspected family
        FamilyId family = 0;
        Tick best = 0;
        for (const auto& obs : alert_window) {
            if (obs.implicated == node && obs.tick >= best) {
                best = obs.tick;
                family = obs.family;
            }
        }

        SubstanceBody req;
        req.type = MessageType::quarantine_request;
        req.implicated = node;
        req.family = family;
        req.source = id();
        req.emitter = label();
        req.locks = {sv.class_lock("lymph")};
        req.initial_hops = std::max(p.alert_hops, sv.hops_to_nearest_lymph(ctx.node()));
        req.time_to_live = req.initial_hops + p.substance_ttl_slack;
        sv.emit_substance(ctx.node(), std::move(req));
    }
}

void ArtificialCell::prober_probe(DispatchContext& ctx) {
    EnvServices& sv = ctx.services();
    const Params& p = sv.params();

    for (NodeId target : sv.probe_targets(ctx.node())) {
        ProbeAnswer answer = sv.probe_node(target);
        AlertKind found;
        std::string detail;
        if (!answer.responded) {
            found = AlertKind::silent;
            detail = "no heartbeat";
        } else if (answer.has_versioned) {
            known_max_version = std::max(known_max_version, answer.min_db_version);
            if (answer.min_db_version + p.staleness_bound < known_max_version) {
                found = AlertKind::stale;
                detail = "v" + std::to_string(answer.min_db_version) + "<v" +
                         std::to_string(known_max_version);
            } else {
                continue;
            }
        } else {
            continue;
        }

        SubstanceBody alert;
        alert.type = MessageType::alert;
        alert.alert_kind = found;
        alert.implicated = target;
        alert.source = id();
        alert.emitter = label();
        alert.detail = detail;
        alert.locks = {sv.class_lock("lymph"), sv.class_lock("cnts")};
        alert.initial_hops = std::max(p.alert_hops, sv.hops_to_nearest_lymph(ctx.node()));
        alert.time_to_live = alert.initial_hops + p.substance_ttl_slack;
        sv.emit_substance(ctx.node(), std::move(alert));
    }
}

void ArtificialCell::repair_try(DispatchContext& ctx) {
    EnvServices& sv = ctx.services();
    if (!sv.node_needs_repair(ctx.node())) return;
    sv.try_disinfect(ctx.node(), repair_families, label());
}

} // namespace sana
