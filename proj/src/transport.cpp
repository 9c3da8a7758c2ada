#include "transport.hpp"

#include <algorithm>
#include <cassert>
#include <optional>
#include <stdexcept>

namespace crossim {

const char* tp_event_name(TpEvent e) {
    switch (e) {
        case TpEvent::Send: return "send";
        case TpEvent::Retransmit: return "retransmit";
        case TpEvent::Ack: return "ack";
        case TpEvent::CeEcho: return "ce_echo";
        case TpEvent::Rto: return "rto";
        case TpEvent::Loss: return "loss";
        case TpEvent::PhaseChange: return "phase_change";
    }
    return "?";
}

Sender::Sender(const SenderConfig& cfg, EventQueue& engine, std::function<void(Packet)> emit)
    : cfg_(cfg), engine_(engine), emit_(std::move(emit)) {
    cc_.mss = cfg_.mss;
    cc_.cwnd = static_cast<double>(cfg_.initial_cwnd_pkts) * cfg_.mss;
    algo_ = make_cc(cfg_.algo, cfg_.mss, cfg_.cc_opts);
    last_phase_ = algo_->phase(cc_);
}

void Sender::log_event(TpEvent e, std::uint64_t seq, const char* detail, std::uint32_t size) {
    log_.push_back(TransportLogEntry{engine_.now(), e, seq, size, cc_.cwnd, cc_.bytes_in_flight,
                                     cc_.srtt, detail});
}

void Sender::note_phase() {
    const char* p = algo_->phase(cc_);
    if (p != last_phase_) {
        last_phase_ = p;
        log_event(TpEvent::PhaseChange, cum_acked_, p);
    }
}

void Sender::app_write(std::uint64_t bytes) {
    app_pending_ += bytes;
    try_send();
}

SimTime Sender::rto_duration() const {
    SimTime base = cc_.srtt > 0 ? cc_.srtt + 4 * cc_.rttvar : cfg_.rto_initial;
    base = std::max(base, cfg_.rto_min);
    return base << std::min(rto_backoff_, 10);
}

void Sender::arm_rto() {
    if (outstanding_.empty()) {
        rto_deadline_ = -1;
        return;
    }
    rto_deadline_ = engine_.now() + rto_duration();
    if (!rto_event_armed_) {
        rto_event_armed_ = true;
        engine_.schedule(rto_deadline_, [this] { on_rto_fire(); });
    }
}

void Sender::on_rto_fire() {
    rto_event_armed_ = false;
    if (outstanding_.empty()) {
        rto_deadline_ = -1;
        return;
    }
    if (rto_deadline_ < 0) return;
    if (engine_.now() < rto_deadline_) {
        // Deadline moved forward by an ACK; re-arm for the remainder.
        rto_event_armed_ = true;
        engine_.schedule(rto_deadline_, [this] { on_rto_fire(); });
        return;
    }
    ++rto_count_;
    ++rto_backoff_;
    log_event(TpEvent::Rto, outstanding_.begin()->first);
    mark_lost(outstanding_.begin()->first);
    in_recovery_ = true;
    recovery_until_ = next_seq_;
    algo_->on_loss(cc_, LossCause::Rto, engine_.now());
    log_event(TpEvent::Loss, outstanding_.begin()->first, "rto");
    algo_->update_pacing(cc_);
    note_phase();
    arm_rto();
    try_send();
}

void Sender::mark_lost(std::uint64_t offset) {
    auto it = outstanding_.find(offset);
    if (it == outstanding_.end()) return;
    if (it->second.in_flight) {
        it->second.in_flight = false;
        cc_.bytes_in_flight -= it->second.size;
    }
    retx_queue_.insert(offset);
}

void Sender::enter_recovery(LossCause cause) {
    in_recovery_ = true;
    recovery_until_ = next_seq_;
    algo_->on_loss(cc_, cause, engine_.now());
}

void Sender::send_range(std::uint64_t offset, std::uint32_t size, bool retransmit) {
    SimTime now = engine_.now();
    Packet pkt;
    pkt.flow_id = cfg_.flow_id;
    pkt.seq = offset;
    pkt.size = size;
    pkt.ecn = cfg_.ecn ? Ecn::Ect0 : Ecn::NotEct;
    pkt.retransmit = retransmit;
    pkt.sent_at = now;
    pkt.delivered_at_send = delivered_total_;

    auto& rec = outstanding_[offset];
    if (!retransmit) {
        rec.size = size;
        rec.first_sent = now;
    }
    rec.last_sent = now;
    rec.delivered_snapshot = delivered_total_;
    rec.in_flight = true;
    rec.app_limited = app_pending_ == 0 && retx_queue_.empty();
    cc_.bytes_in_flight += size;
    bytes_sent_total_ += size;
    if (retransmit) bytes_retransmitted_ += size;

    log_event(retransmit ? TpEvent::Retransmit : TpEvent::Send, offset, nullptr, size);
    // The timer backs the oldest unacked segment; retransmitting it restarts
    // the clock, everything else only starts an idle timer.
    if (rto_deadline_ < 0 || (retransmit && offset == outstanding_.begin()->first)) arm_rto();
    emit_(pkt);
}

void Sender::try_send() {
    SimTime now = engine_.now();
    while (true) {
        std::uint64_t offset;
        std::uint32_t size;
        bool retransmit;
        if (!retx_queue_.empty()) {
            offset = *retx_queue_.begin();
            size = outstanding_.at(offset).size;
            retransmit = true;
        } else if (app_pending_ > 0) {
            offset = next_seq_;
            size = static_cast<std::uint32_t>(std::min<std::uint64_t>(cfg_.mss, app_pending_));
            retransmit = false;
        } else {
            return;
        }
        // Retransmissions replace data already charged to the window, so the
        // cwnd gate applies to new data only; pacing still applies to both.
        if (!retransmit && cc_.bytes_in_flight + size > static_cast<std::uint64_t>(cc_.cwnd)) {
            cwnd_limited_ = true;
            return;
        }
        if (cc_.pacing_rate_bps > 0.0 && now < pace_next_) {
            if (!send_event_armed_) {
                send_event_armed_ = true;
                engine_.schedule(pace_next_, [this] {
                    send_event_armed_ = false;
                    try_send();
                });
            }
            return;
        }
        if (retransmit) {
            retx_queue_.erase(retx_queue_.begin());
        } else {
            next_seq_ += size;
            app_pending_ -= size;
        }
        send_range(offset, size, retransmit);
        if (cc_.pacing_rate_bps > 0.0) {
            SimTime gap = static_cast<SimTime>(static_cast<double>(size) * 8.0 * 1e9 /
                                               cc_.pacing_rate_bps);
            pace_next_ = std::max(pace_next_, now) + gap;
        }
    }
}

void Sender::on_ack(const AckRecord& ack) {
    SimTime now = engine_.now();
    if (ack.cumulative_ack > next_seq_)
        throw std::logic_error("transport: ACK covers bytes never sent");

    std::uint32_t newly_ce = static_cast<std::uint32_t>(ack.ecn_ce_count - last_ce_seen_);
    std::uint32_t newly_recv = static_cast<std::uint32_t>(ack.recv_pkt_count - last_recv_count_);
    last_ce_seen_ = ack.ecn_ce_count;
    last_recv_count_ = ack.recv_pkt_count;

    AckInfo info;
    info.newly_ce = newly_ce;
    info.newly_recv_pkts = newly_recv;
    info.cwnd_limited = cwnd_limited_;
    cwnd_limited_ = false;

    if (ack.cumulative_ack > cum_acked_) {
        std::uint64_t newly = ack.cumulative_ack - cum_acked_;
        cum_acked_ = ack.cumulative_ack;
        delivered_total_ += newly;
        dup_acks_ = 0;
        rto_backoff_ = 0;

        std::optional<SentRange> sample;
        while (!outstanding_.empty()) {
            auto it = outstanding_.begin();
            if (it->first + it->second.size > cum_acked_) break;
            srtt_samples_.push_back(SrttSample{it->first, it->second.first_sent, now});
            if (it->second.in_flight) {
                it->second.in_flight = false;
                cc_.bytes_in_flight -= it->second.size;
            }
            retx_queue_.erase(it->first);
            ++info.newly_acked_pkts;
            sample = it->second;
            outstanding_.erase(it);
        }
        info.newly_acked_bytes = newly;
        info.delivered_total = delivered_total_;

        if (sample) {
            SimTime rtt = now - sample->first_sent;
            info.rtt_sample = rtt;
            info.acked_delivered_snapshot = sample->delivered_snapshot;
            info.app_limited = sample->app_limited;
            SimTime elapsed = now - sample->last_sent;
            if (elapsed > 0) {
                info.delivery_rate_bps =
                    static_cast<double>(delivered_total_ - sample->delivered_snapshot) * 8.0 /
                    to_s(elapsed);
            }
            cc_.min_rtt = std::min(cc_.min_rtt, rtt);
            if (cc_.srtt == 0) {
                cc_.srtt = rtt;
                cc_.rttvar = rtt / 2;
            } else {
                SimTime err = rtt > cc_.srtt ? rtt - cc_.srtt : cc_.srtt - rtt;
                cc_.rttvar = (3 * cc_.rttvar + err) / 4;
                cc_.srtt = (7 * cc_.srtt + rtt) / 8;
            }
        }

        if (in_recovery_) {
            if (cum_acked_ >= recovery_until_) {
                in_recovery_ = false;
                algo_->on_recovery_exit(cc_, now);
            } else if (!cfg_.rto_only) {
                // Partial ACK: the next hole was lost too.
                mark_lost(cum_acked_);
            }
        }
    } else if (!outstanding_.empty()) {
        ++dup_acks_;
        if (!cfg_.rto_only && dup_acks_ == 3 && !in_recovery_) {
            log_event(TpEvent::Loss, cum_acked_, "dupack");
            mark_lost(cum_acked_);
            enter_recovery(LossCause::DupAck);
        }
    }

    if (newly_ce > 0) {
        if (newly_ce > newly_recv)
            throw std::logic_error("transport: CE count exceeds packets received");
        log_event(TpEvent::CeEcho, ack.cumulative_ack);
        algo_->on_ecn_echo(cc_, newly_ce, newly_recv, now);
    }

    algo_->on_ack(cc_, info, now);
    cc_.cwnd = std::max(cc_.cwnd, static_cast<double>(cc_.mss));
    algo_->update_pacing(cc_);
    log_event(TpEvent::Ack, ack.cumulative_ack);
    note_phase();
    // The retransmission timer restarts only when the ACK advanced; a run of
    // duplicate ACKs must not keep deferring the timeout.
    if (outstanding_.empty()) {
        rto_deadline_ = -1;
    } else if (info.newly_acked_bytes > 0) {
        arm_rto();
    }
    try_send();
}

Receiver::Receiver(int flow_id, std::function<void(const AckRecord&)> send_ack)
    : flow_id_(flow_id), send_ack_(std::move(send_ack)) {}

void Receiver::on_packet(const Packet& pkt, SimTime now) {
    ++recv_count_;
    if (pkt.ecn == Ecn::Ce) ++ce_count_;

    std::uint64_t before = cum_;
    std::uint64_t end = pkt.seq + pkt.size;
    if (end <= cum_) {
        duplicate_bytes_ += pkt.size;
    } else if (pkt.seq <= cum_) {
        cum_ = end;
        // Pull any previously buffered ranges that are now contiguous.
        for (auto it = ooo_.begin(); it != ooo_.end();) {
            if (it->first > cum_) break;
            cum_ = std::max(cum_, it->first + it->second);
            it = ooo_.erase(it);
        }
    } else {
        auto [it, inserted] = ooo_.emplace(pkt.seq, pkt.size);
        if (!inserted) duplicate_bytes_ += pkt.size;
        (void)it;
    }

    std::uint32_t newly = static_cast<std::uint32_t>(cum_ - before);
    arrivals_.push_back(Arrival{now, pkt.seq, pkt.size, newly, pkt.ecn == Ecn::Ce, pkt.sent_at});
    if (newly > 0 && inorder_sink_) inorder_sink_(newly, now);
    send_ack_(AckRecord{cum_, ce_count_, recv_count_, now});
}

}  // namespace crossim
