#include "rlc_queue.hpp"

#include <cmath>
#include <stdexcept>

namespace crossim {

namespace {
// Occupancy at or below one MTU exits the CoDel dropping state.
constexpr std::uint64_t kCodelMtuBytes = 1500;
}  // namespace

std::uint64_t bdp_buffer_bytes(double nominal_bw_bps, double one_way_delay_s, double fraction_pct) {
    double bdp_bytes = nominal_bw_bps * (2.0 * one_way_delay_s) / 8.0;
    return static_cast<std::uint64_t>(fraction_pct / 100.0 * bdp_bytes);
}

FlowQueue::FlowQueue(int flow_id, const AqmSetup& setup, std::uint64_t capacity_bytes,
                     RandomStream* red_coin, RandomStream* l4s_coin)
    : flow_id_(flow_id),
      setup_(setup),
      capacity_(capacity_bytes),
      red_coin_(red_coin),
      l4s_coin_(l4s_coin) {
    if (setup_.kind == AqmKind::DropTail) setup_.mode = ActionMode::Drop;
    if (setup_.kind == AqmKind::Ared) {
        ared_.max_p = setup_.ared.red.p_max;
        // Targets default to the middle band of the RED region.
        auto& a = setup_.ared;
        double span = a.red.max_th - a.red.min_th;
        if (a.target_low <= 0.0) a.target_low = a.red.min_th + 0.4 * span;
        if (a.target_high <= 0.0) a.target_high = a.red.min_th + 0.6 * span;
    }
}

void FlowQueue::record(SimTime t, QueueEventType type, const Packet& pkt, SimTime sojourn) {
    log_.push_back(QueueEvent{t, type, pkt.seq, pkt.size, sojourn, occupancy_});
}

EnqueueResult FlowQueue::enqueue(Packet pkt, SimTime now) {
    if (setup_.kind == AqmKind::Red || setup_.kind == AqmKind::Ared) {
        // Average updates on every arrival against the pre-arrival length.
        RedConfig cfg = setup_.kind == AqmKind::Ared ? setup_.ared.red : setup_.red;
        if (setup_.kind == AqmKind::Ared) cfg.p_max = ared_.max_p;
        red_.avg = update_avg(red_.avg, static_cast<double>(occupancy_), cfg.w_q);
        if (red_decision(red_, cfg, *red_coin_) == RedDecision::Act) {
            if (setup_.mode == ActionMode::Mark && pkt.ecn == Ecn::Ect0) {
                pkt.ecn = Ecn::Ce;
                ++counters_.marked;
                record(now, QueueEventType::Mark, pkt);
            } else {
                ++counters_.dropped_aqm;
                record(now, QueueEventType::DropAqm, pkt);
                return EnqueueResult::DroppedAqm;
            }
        }
    }
    if (occupancy_ + pkt.size > capacity_) {
        ++counters_.dropped_overflow;
        record(now, QueueEventType::DropOverflow, pkt);
        return EnqueueResult::DroppedOverflow;
    }
    pkt.enqueued_at = now;
    occupancy_ += pkt.size;
    buffer_.push_back(pkt);
    ++counters_.enqueued;
    record(now, QueueEventType::Enqueue, pkt);
    return EnqueueResult::Enqueued;
}

Packet FlowQueue::pop_head() {
    Packet p = buffer_.front();
    buffer_.pop_front();
    occupancy_ -= p.size;
    return p;
}

std::optional<Packet> FlowQueue::dequeue(SimTime now) {
    if (buffer_.empty()) {
        if (setup_.kind == AqmKind::Codel) codel_.first_above_time = 0;
        return std::nullopt;
    }
    switch (setup_.kind) {
        case AqmKind::Codel:
            return dequeue_codel(now);
        case AqmKind::L4s:
            return dequeue_l4s(now);
        default: {
            Packet p = pop_head();
            ++counters_.delivered;
            record(now, QueueEventType::Dequeue, p, now - p.enqueued_at);
            return p;
        }
    }
}

FlowQueue::CodelPeek FlowQueue::codel_peek(SimTime now) const {
    CodelPeek r;
    if (buffer_.empty()) return r;
    r.has_packet = true;
    const Packet& head = buffer_.front();
    SimTime sojourn = now - head.enqueued_at;
    if (sojourn < setup_.codel.target || occupancy_ - head.size <= kCodelMtuBytes) return r;
    if (codel_.first_above_time == 0) return r;
    r.ok_to_drop = now >= codel_.first_above_time;
    return r;
}

// codel_peek + first_above_time maintenance, mirroring the reference
// dodequeue() but leaving the packet in place until its fate is decided.
std::optional<Packet> FlowQueue::dequeue_codel(SimTime now) {
    auto probe = [&]() -> CodelPeek {
        CodelPeek r;
        if (buffer_.empty()) {
            codel_.first_above_time = 0;
            return r;
        }
        r.has_packet = true;
        const Packet& head = buffer_.front();
        SimTime sojourn = now - head.enqueued_at;
        if (sojourn < setup_.codel.target || occupancy_ - head.size <= kCodelMtuBytes) {
            codel_.first_above_time = 0;
        } else if (codel_.first_above_time == 0) {
            codel_.first_above_time = now + setup_.codel.interval;
        } else if (now >= codel_.first_above_time) {
            r.ok_to_drop = true;
        }
        return r;
    };

    auto deliver = [&](bool mark) -> Packet {
        Packet p = pop_head();
        if (mark) {
            p.ecn = Ecn::Ce;
            ++counters_.marked;
            record(now, QueueEventType::Mark, p);
        }
        ++counters_.delivered;
        record(now, QueueEventType::Dequeue, p, now - p.enqueued_at);
        return p;
    };
    auto drop_head = [&]() {
        Packet p = pop_head();
        ++counters_.dropped_aqm;
        record(now, QueueEventType::DropAqm, p);
    };
    auto markable = [&]() {
        return setup_.mode == ActionMode::Mark && buffer_.front().ecn == Ecn::Ect0;
    };

    CodelPeek r = probe();
    if (codel_.dropping) {
        if (!r.ok_to_drop) {
            codel_.dropping = false;
        } else {
            while (codel_.dropping && now >= codel_.drop_next) {
                ++codel_.count;
                if (markable()) {
                    codel_.drop_next =
                        codel_control_law(codel_.drop_next, setup_.codel.interval, codel_.count);
                    return deliver(true);
                }
                drop_head();
                r = probe();
                if (!r.ok_to_drop) {
                    codel_.dropping = false;
                } else {
                    codel_.drop_next =
                        codel_control_law(codel_.drop_next, setup_.codel.interval, codel_.count);
                }
                if (!r.has_packet) return std::nullopt;
            }
        }
    } else if (r.ok_to_drop) {
        bool marked = markable();
        if (marked) {
            // The acted-on packet leaves with CE instead of being removed.
        } else {
            drop_head();
            r = probe();
        }
        codel_.dropping = true;
        std::uint32_t delta = codel_.count - codel_.lastcount;
        codel_.count = 1;
        if (delta > 1 && now - codel_.drop_next < 16 * setup_.codel.interval) codel_.count = delta;
        codel_.drop_next = codel_control_law(now, setup_.codel.interval, codel_.count);
        codel_.lastcount = codel_.count;
        if (marked) return deliver(true);
        if (!r.has_packet) return std::nullopt;
    }
    if (buffer_.empty()) return std::nullopt;
    return deliver(false);
}

std::optional<Packet> FlowQueue::dequeue_l4s(SimTime now) {
    while (!buffer_.empty()) {
        const Packet& head = buffer_.front();
        SimTime qdelay = now - head.enqueued_at;
        double p = l4s_probability(qdelay, setup_.l4s, l4s_, now);
        bool act = l4s_coin_->bernoulli(p);
        if (!act) {
            Packet out = pop_head();
            ++counters_.delivered;
            record(now, QueueEventType::Dequeue, out, qdelay);
            return out;
        }
        if (setup_.mode == ActionMode::Mark && head.ecn == Ecn::Ect0) {
            Packet out = pop_head();
            out.ecn = Ecn::Ce;
            ++counters_.marked;
            record(now, QueueEventType::Mark, out);
            ++counters_.delivered;
            record(now, QueueEventType::Dequeue, out, qdelay);
            return out;
        }
        Packet dropped = pop_head();
        ++counters_.dropped_aqm;
        record(now, QueueEventType::DropAqm, dropped);
    }
    return std::nullopt;
}

void FlowQueue::ared_adapt_tick() {
    if (setup_.kind != AqmKind::Ared) return;
    ared_adapt(ared_, setup_.ared, red_.avg);
}

RoundRobinScheduler::RoundRobinScheduler(std::vector<FlowQueue*> flows)
    : flows_(std::move(flows)) {
    if (flows_.empty()) throw std::invalid_argument("scheduler: no flows");
    last_ = flows_.size() - 1;
}

std::optional<Packet> RoundRobinScheduler::dequeue(SimTime now) {
    const std::size_t n = flows_.size();
    for (std::size_t step = 1; step <= n; ++step) {
        std::size_t i = (last_ + step) % n;
        if (flows_[i]->empty()) continue;
        if (auto pkt = flows_[i]->dequeue(now)) {
            last_ = i;
            return pkt;
        }
    }
    return std::nullopt;
}

bool RoundRobinScheduler::all_empty() const {
    for (const auto* f : flows_)
        if (!f->empty()) return false;
    return true;
}

}  // namespace crossim
