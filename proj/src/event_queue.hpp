#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <unordered_map>
#include <vector>

#include "sim_time.hpp"

namespace crossim {

using EventHandle = std::uint64_t;

struct RunSummary {
    std::uint64_t events_fired = 0;
    SimTime final_clock = 0;
    bool drained = false;  // queue emptied before t_end
};

// Deterministic discrete-event engine. Events at equal timestamps fire in
// scheduling order (stable FIFO tie-break).
class EventQueue {
  public:
    SimTime now() const { return now_; }

    // Throws std::invalid_argument when `at` lies in the past.
    EventHandle schedule(SimTime at, std::function<void()> fn);

    // Returns false when the event already fired or was cancelled.
    bool cancel(EventHandle h);

    RunSummary run_until(SimTime t_end);

    bool empty() const { return callbacks_.empty(); }
    std::uint64_t scheduled_total() const { return next_id_; }

  private:
    struct Entry {
        SimTime at;
        EventHandle id;
        bool operator>(const Entry& o) const {
            return at != o.at ? at > o.at : id > o.id;
        }
    };

    SimTime now_ = 0;
    EventHandle next_id_ = 0;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap_;
    std::unordered_map<EventHandle, std::function<void()>> callbacks_;
};

}  // namespace crossim
