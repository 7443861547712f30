#ifndef SANA_CORE_EVENT_HPP
#define SANA_CORE_EVENT_HPP

#include <cstdint>
#include <queue>
#include <variant>
#include <vector>

#include "core/packet.hpp"
#include "core/types.hpp"

namespace sana {

// Execution order within a tick: lower value first. Traffic is inspected
// before agents move or die.
enum class EventKind : std::uint8_t {
    packet_arrival = 0,
    substance_arrival = 1,
    file_access = 2,
    component_timer = 3,
    cell_migration = 4,
    cell_expiry = 5,
    cnts_generation = 6,
};

const char* to_string(EventKind kind);

// Which per-tick system a component_timer event drives.
enum class TimerKind : std::uint8_t {
    adversary,        // background traffic, worm steps, infection activity
    update_server,    // scripted signature additions
    component_poll,   // classic component's central-update poll
    cell_task,        // fusion evaluation / prober probe cycle
    env_check,        // environment self-checks of registered components
    self_management,  // levels, beacons, decay, quarantine observation
    injection,        // scripted fault injection (kill cell/lymph/cnts)
};

struct PacketArrival {
    Packet packet;
    NodeId at;
};

struct SubstanceArrival {
    SubstanceId substance = 0; // body looked up in the fabric
    NodeId at = kNoNode;
    std::uint32_t hops_to_go = 0;
};

struct FileAccessEvent {
    NodeId node = kNoNode;
    SigId sig = kNoSig;
};

struct TimerFire {
    TimerKind timer;
    std::uint64_t ref = 0; // component id / injection index, kind-specific
};

struct MigrationPhase {};

struct CellExpiry {
    CellId cell = 0;
};

struct CntsGeneration {
    std::uint32_t station = 0;
};

using EventPayload = std::variant<PacketArrival, SubstanceArrival, FileAccessEvent,
                                  TimerFire, MigrationPhase, CellExpiry, CntsGeneration>;

struct Event {
    Tick due = 0;
    EventKind kind = EventKind::packet_arrival;
    std::uint64_t seq = 0;
    EventPayload payload;
};

// Min-heap on (due_tick, kind priority, insertion sequence).
class EventQueue {
public:
    void push(Tick due, EventKind kind, EventPayload payload);
    bool empty() const { return heap_.empty(); }
    const Event& top() const { return heap_.top(); }
    Event pop();
    std::size_t size() const { return heap_.size(); }
    std::uint64_t next_seq() const { return seq_; }

private:
    struct Later {
        bool operator()(const Event& a, const Event& b) const {
            if (a.due != b.due) return a.due > b.due;
            if (a.kind != b.kind) return a.kind > b.kind;
            return a.seq > b.seq;
        }
    };
    std::priority_queue<Event, std::vector<Event>, Later> heap_;
    std::uint64_t seq_ = 0;
};

} // namespace sana

#endif
