#include "core/event.hpp"

namespace sana {

const char* to_string(EventKind kind) {
    switch (kind) {
    case EventKind::packet_arrival: return "packet_arrival";
    case EventKind::substance_arrival: return "substance_arrival";
    case EventKind::file_access: return "file_access";
    case EventKind::component_timer: return "component_timer";
    case EventKind::cell_migration: return "cell_migration";
    case EventKind::cell_expiry: return "cell_expiry";
    case EventKind::cnts_generation: return "cnts_generation";
    }
    return "?";
}

void EventQueue::push(Tick due, EventKind kind, EventPayload payload) {
    heap_.push(Event{due, kind, seq_++, std::move(payload)});
}

Event EventQueue::pop() {
    Event e = heap_.top();
    heap_.pop();
    return e;
}

} // namespace sana
