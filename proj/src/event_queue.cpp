#include "event_queue.hpp"

#include <stdexcept>

namespace crossim {

EventHandle EventQueue::schedule(SimTime at, std::function<void()> fn) {
    if (at < now_) throw std::invalid_argument("schedule: event time lies in the past");
    EventHandle id = next_id_++;
    heap_.push(Entry{at, id});
    callbacks_.emplace(id, std::move(fn));
    return id;
}

bool EventQueue::cancel(EventHandle h) {
    return callbacks_.erase(h) > 0;  // heap entry is skipped lazily
}

RunSummary EventQueue::run_until(SimTime t_end) {
    RunSummary summary;
    while (!heap_.empty() && heap_.top().at <= t_end) {
        Entry e = heap_.top();
        heap_.pop();
        auto it = callbacks_.find(e.id);
        if (it == callbacks_.end()) continue;  // cancelled
        auto fn = std::move(it->second);
        callbacks_.erase(it);
        now_ = e.at;
        fn();
        ++summary.events_fired;
    }
    summary.drained = callbacks_.empty();
    now_ = t_end > now_ ? t_end : now_;
    summary.final_clock = now_;
    return summary;
}

}  // namespace crossim
