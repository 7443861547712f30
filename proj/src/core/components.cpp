#include "core/components.hpp"

namespace sana {

std::pair<Verdict, std::size_t> evaluate_rules(const RuleSet& rules, const Packet& packet,
                                               bool payload_aware) {
    for (std::size_t i = 0; i < rules.size(); ++i) {
        const CompiledRule& r = rules[i];
        if (r.protocol && *r.protocol != packet.protocol) continue;
        if (r.port && *r.port != packet.port) continue;
        if (r.src && *r.src != packet.src) continue;
        if (r.dst && *r.dst != packet.dst) continue;
        if (r.sig) {
            if (!payload_aware) continue;
            bool carried = false;
            for (SigId s : packet.payload_sigs) {
                if (s == *r.sig) {
                    carried = true;
                    break;
                }
            }
            if (!carried) continue;
        }
        return {r.action, i};
    }
    return {Verdict::pass, static_cast<std::size_t>(-1)};
}

std::vector<SigId> scan_exact(const std::vector<SigId>& sigs, const SignatureDb& db) {
    std::vector<SigId> hits;
    for (SigId s : sigs) {
        if (db.knows(s)) {
            hits.push_back(s);
        }
    }
    return hits;
}

Verdict ClassicComponent::run_header_rules(DispatchContext& ctx, const Packet& packet,
                                           bool payload_aware) {
    bool any_claimed = false;
    bool any_applicable = false;
    for (std::size_t i = 0; i < policy_->size(); ++i) {
        const CompiledRule& r = (*policy_)[i];
        if (r.sig && !payload_aware) continue;
        any_applicable = true;
        std::string key = (r.sig ? "hdrsig:" : "hdr:") + std::to_string(i);
        if (ctx.claim_check(*this, key)) {
            any_claimed = true;
        }
    }
    if (any_applicable && !any_claimed) {
        return Verdict::pass; // another resident component already ran the table
    }
    return evaluate_rules(*policy_, packet, payload_aware).first;
}

void ClassicComponent::classic_alert(DispatchContext& ctx, AlertKind kind, SigId sig,
                                     NodeId implicated, const char* what) {
    EnvServices& sv = ctx.services();
    if (sv.mode() == Mode::baseline || sv.mode() == Mode::none) {
        // uncoordinated stack: alerts go to the local log nobody reads
        sv.local_log(ctx.node(), std::string(what) + " sig=" +
                                     (sig == kNoSig ? "-" : sv.signatures().name(sig)) +
                                     " node=" + std::to_string(implicated));
        return;
    }
    SubstanceBody body;
    body.type = MessageType::alert;
    body.alert_kind = kind;
    body.sig = sig;
    if (sig != kNoSig) {
        body.family = sv.signatures().family_of(sig);
        body.generation = sv.signatures().get(sig).generation;
    }
    body.implicated = implicated;
    body.source = id();
    body.emitter = label();
    body.locks = {sv.class_lock("fusion"), sv.class_lock("lymph"), sv.class_lock("cnts")};
    const auto& p = sv.params();
    body.initial_hops = std::max(p.alert_hops, sv.hops_to_nearest_lymph(ctx.node()));
    body.time_to_live = body.initial_hops + p.substance_ttl_slack;
    sv.emit_substance(ctx.node(), std::move(body));
}

Verdict Antivirus::on_packet(DispatchContext& ctx, const Packet& packet) {
    // observes headers only; payload scanning happens on file access
    return run_header_rules(ctx, packet, false);
}

Verdict Antivirus::on_file_access(DispatchContext& ctx, SigId sig) {
    std::string key = "fdb:" + std::to_string(sig) + ":v" + std::to_string(db_.version);
    if (!ctx.claim_check(*this, key)) {
        return Verdict::pass;
    }
    if (db_.knows(sig)) {
        classic_alert(ctx, AlertKind::sig_exact, sig, ctx.node(), "av_file_alert");
        return Verdict::alert;
    }
    return Verdict::pass;
}

void Antivirus::on_timer(DispatchContext& ctx) {
    if (update_failed_) return;
    db_.sync(ctx.services().server_signatures(), ctx.services().server_version());
}

Verdict Firewall::on_packet(DispatchContext& ctx, const Packet& packet) {
    return run_header_rules(ctx, packet, false);
}

Verdict PacketFilter::on_packet(DispatchContext& ctx, const Packet& packet) {
    return run_header_rules(ctx, packet, false);
}

Verdict Ids::on_packet(DispatchContext& ctx, const Packet& packet) {
    Verdict out = run_header_rules(ctx, packet, true);
    for (SigId s : packet.payload_sigs) {
        std::string key = "db:" + std::to_string(s) + ":v" + std::to_string(db_.version);
        if (!ctx.claim_check(*this, key)) {
            continue; // same-version database lookup already done at this node
        }
        if (db_.knows(s)) {
            classic_alert(ctx, AlertKind::sig_exact, s, packet.src, "ids_alert");
            ctx.note_sig_detection();
            return Verdict::drop; // inline perimeter defense
        }
    }
    return out;
}

void Ids::on_timer(DispatchContext& ctx) {
    if (update_failed_) return;
    db_.sync(ctx.services().server_signatures(), ctx.services().server_version());
}

} // namespace sana
