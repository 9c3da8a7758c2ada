#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "aqm.hpp"
#include "packet.hpp"
#include "random.hpp"
#include "sim_time.hpp"

namespace crossim {

// fraction is a percentage (200 = twice the BDP); RTT taken as 2x one-way.
std::uint64_t bdp_buffer_bytes(double nominal_bw_bps, double one_way_delay_s, double fraction_pct);

enum class QueueEventType : std::uint8_t { Enqueue, Dequeue, DropAqm, DropOverflow, Mark };

struct QueueEvent {
    SimTime t = 0;
    QueueEventType type = QueueEventType::Enqueue;
    std::uint64_t seq = 0;
    std::uint32_t size = 0;
    SimTime sojourn = 0;            // Dequeue only
    std::uint64_t occupancy = 0;    // bytes after the event
};

struct QueueCounters {
    std::uint64_t enqueued = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped_aqm = 0;
    std::uint64_t dropped_overflow = 0;
    std::uint64_t marked = 0;
};

enum class EnqueueResult : std::uint8_t { Enqueued, DroppedAqm, DroppedOverflow };

// Per-flow RLC buffer with a pluggable discipline. RED/ARED act on arrivals,
// CoDel/L4S act when the scheduler grants a dequeue opportunity; either kind
// can drop or CE-mark depending on the action mode. Marking never touches
// NotEct packets; those are dropped instead.
class FlowQueue {
  public:
    FlowQueue(int flow_id, const AqmSetup& setup, std::uint64_t capacity_bytes,
              RandomStream* red_coin, RandomStream* l4s_coin);

    EnqueueResult enqueue(Packet pkt, SimTime now);

    // One dequeue opportunity. May drop packets on the way (logged) and
    // returns the delivered packet, or nullopt when nothing deliverable
    // remains in this queue.
    std::optional<Packet> dequeue(SimTime now);

    void ared_adapt_tick();

    bool empty() const { return buffer_.empty(); }
    std::uint64_t occupancy() const { return occupancy_; }
    std::uint64_t capacity() const { return capacity_; }
    int flow_id() const { return flow_id_; }
    const AqmSetup& setup() const { return setup_; }

    const QueueCounters& counters() const { return counters_; }
    const std::vector<QueueEvent>& log() const { return log_; }
    std::vector<QueueEvent> take_log() { return std::move(log_); }
    std::uint64_t queued_packets() const { return buffer_.size(); }

    const RedState& red_state() const { return red_; }
    const AredState& ared_state() const { return ared_; }
    const CodelState& codel_state() const { return codel_; }
    const L4sState& l4s_state() const { return l4s_; }

  private:
    struct CodelPeek {
        bool ok_to_drop = false;
        bool has_packet = false;
    };

    void record(SimTime t, QueueEventType type, const Packet& pkt, SimTime sojourn = 0);
    Packet pop_head();
    CodelPeek codel_peek(SimTime now) const;
    std::optional<Packet> dequeue_codel(SimTime now);
    std::optional<Packet> dequeue_l4s(SimTime now);

    int flow_id_;
    AqmSetup setup_;
    std::uint64_t capacity_;
    std::deque<Packet> buffer_;
    std::uint64_t occupancy_ = 0;

    RedState red_;
    AredState ared_;
    CodelState codel_;
    L4sState l4s_;

    RandomStream* red_coin_;
    RandomStream* l4s_coin_;

    QueueCounters counters_;
    std::vector<QueueEvent> log_;
};

// Fixed cyclic order over the flow queues, resuming after the flow that last
// delivered; empty queues are skipped.
class RoundRobinScheduler {
  public:
    explicit RoundRobinScheduler(std::vector<FlowQueue*> flows);

    // Next deliverable packet across all queues, applying each visited
    // queue's dequeue-side AQM. nullopt when every queue is empty or every
    // candidate was consumed by AQM drops.
    std::optional<Packet> dequeue(SimTime now);

    bool all_empty() const;

  private:
    std::vector<FlowQueue*> flows_;
    std::size_t last_ = 0;
};

}  // namespace crossim
