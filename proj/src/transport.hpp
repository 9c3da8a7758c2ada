#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "cc.hpp"
#include "event_queue.hpp"
#include "packet.hpp"
#include "sim_time.hpp"

namespace crossim {

enum class TpEvent : std::uint8_t { Send, Retransmit, Ack, CeEcho, Rto, Loss, PhaseChange };

const char* tp_event_name(TpEvent e);

struct TransportLogEntry {
    SimTime t = 0;
    TpEvent event = TpEvent::Send;
    std::uint64_t seq = 0;
    std::uint32_t size = 0;  // Send/Retransmit payload bytes
    double cwnd = 0.0;
    std::uint64_t bytes_in_flight = 0;
    SimTime srtt = 0;
    const char* detail = nullptr;  // static strings only
};

struct AckRecord {
    std::uint64_t cumulative_ack = 0;  // bytes contiguously received
    std::uint64_t ecn_ce_count = 0;    // cumulative CE arrivals
    std::uint64_t recv_pkt_count = 0;  // cumulative arrivals
    SimTime recv_time = 0;
};

// Round-trip sample measured from the original transmission of a byte range
// to the first cumulative ACK covering it, so retransmission delay is
// included.
struct SrttSample {
    std::uint64_t seq = 0;
    SimTime first_sent = 0;
    SimTime first_acked = 0;
};

struct SenderConfig {
    int flow_id = 0;
    std::uint32_t mss = 1200;
    CcAlgo algo = CcAlgo::Cubic;
    bool ecn = false;       // send ECT(0), react to CE echoes
    bool rto_only = false;  // disable duplicate-ACK detection
    CcOptions cc_opts;
    SimTime rto_min = 20 * kMillisecond;
    SimTime rto_initial = 200 * kMillisecond;
    std::uint32_t initial_cwnd_pkts = 10;
};

// Reliable byte-stream sender: cwnd/pacing gated transmission, duplicate-ACK
// and RTO loss detection, ECN echo accounting, pluggable congestion control.
class Sender {
  public:
    Sender(const SenderConfig& cfg, EventQueue& engine, std::function<void(Packet)> emit);

    void app_write(std::uint64_t bytes);
    void on_ack(const AckRecord& ack);

    const CcState& cc() const { return cc_; }
    CcAlgorithm& algorithm() { return *algo_; }
    const std::vector<TransportLogEntry>& log() const { return log_; }
    const std::vector<SrttSample>& srtt_samples() const { return srtt_samples_; }
    std::vector<TransportLogEntry> take_log() { return std::move(log_); }
    std::vector<SrttSample> take_srtt_samples() { return std::move(srtt_samples_); }

    std::uint64_t bytes_sent_total() const { return bytes_sent_total_; }
    std::uint64_t bytes_retransmitted() const { return bytes_retransmitted_; }
    std::uint64_t app_backlog() const { return app_pending_; }
    std::uint64_t bytes_acked() const { return cum_acked_; }
    std::uint64_t rto_count() const { return rto_count_; }

  private:
    struct SentRange {
        std::uint32_t size = 0;
        SimTime first_sent = 0;
        SimTime last_sent = 0;
        std::uint64_t delivered_snapshot = 0;
        bool in_flight = false;
        bool app_limited = false;
    };

    void try_send();
    void send_range(std::uint64_t offset, std::uint32_t size, bool retransmit);
    void mark_lost(std::uint64_t offset);
    void enter_recovery(LossCause cause);
    SimTime rto_duration() const;
    void arm_rto();
    void on_rto_fire();
    void log_event(TpEvent e, std::uint64_t seq, const char* detail = nullptr,
                   std::uint32_t size = 0);
    void note_phase();

    SenderConfig cfg_;
    EventQueue& engine_;
    std::function<void(Packet)> emit_;

    CcState cc_;
    std::unique_ptr<CcAlgorithm> algo_;
    const char* last_phase_ = nullptr;

    std::uint64_t app_pending_ = 0;
    std::uint64_t next_seq_ = 0;
    std::uint64_t cum_acked_ = 0;
    std::map<std::uint64_t, SentRange> outstanding_;
    std::set<std::uint64_t> retx_queue_;

    int dup_acks_ = 0;
    bool in_recovery_ = false;
    std::uint64_t recovery_until_ = 0;

    std::uint64_t delivered_total_ = 0;
    std::uint64_t last_ce_seen_ = 0;
    std::uint64_t last_recv_count_ = 0;

    SimTime pace_next_ = 0;
    bool send_event_armed_ = false;
    bool cwnd_limited_ = false;

    int rto_backoff_ = 0;
    SimTime rto_deadline_ = -1;
    bool rto_event_armed_ = false;

    std::uint64_t bytes_sent_total_ = 0;
    std::uint64_t bytes_retransmitted_ = 0;
    std::uint64_t rto_count_ = 0;

    std::vector<TransportLogEntry> log_;
    std::vector<SrttSample> srtt_samples_;
};

// Receiver side: reassembles the byte stream, counts CE marks, and replies
// with a cumulative ACK for every arrival.
class Receiver {
  public:
    struct Arrival {
        SimTime t = 0;
        std::uint64_t seq = 0;
        std::uint32_t size = 0;
        std::uint32_t newly_inorder = 0;  // bytes this arrival made contiguous
        bool ce = false;
        SimTime sent_at = 0;
    };

    Receiver(int flow_id, std::function<void(const AckRecord&)> send_ack);

    void on_packet(const Packet& pkt, SimTime now);

    // Invoked with (newly in-order bytes, now); used by the streaming client.
    void set_inorder_sink(std::function<void(std::uint64_t, SimTime)> sink) {
        inorder_sink_ = std::move(sink);
    }

    int flow_id() const { return flow_id_; }
    std::uint64_t cum_bytes() const { return cum_; }
    std::uint64_t ce_count() const { return ce_count_; }
    std::uint64_t recv_pkt_count() const { return recv_count_; }
    std::uint64_t duplicate_bytes() const { return duplicate_bytes_; }
    const std::vector<Arrival>& arrivals() const { return arrivals_; }
    std::vector<Arrival> take_arrivals() { return std::move(arrivals_); }

  private:
    int flow_id_;
    std::function<void(const AckRecord&)> send_ack_;
    std::function<void(std::uint64_t, SimTime)> inorder_sink_;

    std::uint64_t cum_ = 0;
    std::map<std::uint64_t, std::uint32_t> ooo_;  // offset -> size
    std::uint64_t ce_count_ = 0;
    std::uint64_t recv_count_ = 0;
    std::uint64_t duplicate_bytes_ = 0;
    std::vector<Arrival> arrivals_;
};

}  // namespace crossim
