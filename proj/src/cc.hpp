#pragma once

#include <cstdint>
#include <deque>
#include <limits>
#include <memory>

#include "sim_time.hpp"

namespace crossim {

enum class CcAlgo : std::uint8_t { Reno, Cubic, BbrLite, DctcpEcn };
enum class LossCause : std::uint8_t { Rto, DupAck };

struct CcState {
    double cwnd = 0.0;      // bytes
    double ssthresh = std::numeric_limits<double>::max();
    SimTime srtt = 0;       // 0 until the first sample
    SimTime rttvar = 0;
    SimTime min_rtt = std::numeric_limits<SimTime>::max();
    std::uint64_t bytes_in_flight = 0;
    double pacing_rate_bps = 0.0;  // 0 = unpaced
    std::uint32_t mss = 1200;
};

// Everything an algorithm may want from one ACK event.
struct AckInfo {
    std::uint64_t newly_acked_bytes = 0;
    std::uint32_t newly_acked_pkts = 0;
    std::uint32_t newly_ce = 0;         // CE-marked arrivals reported since last ACK
    std::uint32_t newly_recv_pkts = 0;  // arrivals reported since last ACK
    SimTime rtt_sample = 0;             // 0 when no sample
    double delivery_rate_bps = 0.0;     // 0 when no sample
    std::uint64_t delivered_total = 0;  // cumulative delivered bytes at this ACK
    std::uint64_t acked_delivered_snapshot = 0;  // delivered_total at send of acked pkt
    bool app_limited = false;    // acked packet was sent with nothing left to send
    bool cwnd_limited = false;   // the window gate blocked a send since the last ACK
};

// Standard growth curve after a window reduction: W(t) = C*(t-K)^3 + W_max
// with C = 0.4 segments/s^3 and K = cbrt(W_max * 0.3 / C), in byte units.
// Never returns less than one MSS.
double cubic_window(double t_s, double w_max_bytes, double mss_bytes);

class CcAlgorithm {
  public:
    virtual ~CcAlgorithm() = default;
    virtual void on_ack(CcState& cc, const AckInfo& info, SimTime now) = 0;
    virtual void on_loss(CcState& cc, LossCause cause, SimTime now) = 0;
    virtual void on_ecn_echo(CcState& cc, std::uint32_t newly_ce, std::uint32_t newly_recv,
                             SimTime now);
    virtual void on_recovery_exit(CcState& cc, SimTime now);
    virtual void update_pacing(CcState& cc);
    virtual const char* phase(const CcState& cc) const;
    virtual const char* name() const = 0;
};

struct CcOptions {
    bool hystart = true;  // Cubic only
    double dctcp_gain = 1.0 / 16.0;
};

std::unique_ptr<CcAlgorithm> make_cc(CcAlgo algo, std::uint32_t mss, const CcOptions& opts = {});

// ---------------------------------------------------------------------------

class RenoCc : public CcAlgorithm {
  public:
    void on_ack(CcState&, const AckInfo&, SimTime) override;
    void on_loss(CcState&, LossCause, SimTime) override;
    void on_ecn_echo(CcState&, std::uint32_t, std::uint32_t, SimTime) override;
    const char* name() const override { return "reno"; }

  private:
    SimTime last_ce_cut_ = -1;
};

class DctcpCc : public CcAlgorithm {
  public:
    explicit DctcpCc(double gain) : gain_(gain) {}
    void on_ack(CcState&, const AckInfo&, SimTime) override;
    void on_loss(CcState&, LossCause, SimTime) override;
    void on_ecn_echo(CcState&, std::uint32_t, std::uint32_t, SimTime) override;
    const char* name() const override { return "dctcp"; }
    double alpha() const { return alpha_; }

  private:
    double gain_;
    double alpha_ = 0.0;
    double window_acked_ = 0.0;
    double window_start_cwnd_ = 0.0;
    std::uint64_t ce_in_window_ = 0;
    std::uint64_t recv_in_window_ = 0;
};

class CubicCc : public CcAlgorithm {
  public:
    explicit CubicCc(bool hystart) : hystart_(hystart) {}
    void on_ack(CcState&, const AckInfo&, SimTime) override;
    void on_loss(CcState&, LossCause, SimTime) override;
    void on_ecn_echo(CcState&, std::uint32_t, std::uint32_t, SimTime) override;
    const char* name() const override { return "cubic"; }
    double w_max() const { return w_max_; }

  private:
    void reduce(CcState& cc, SimTime now, bool to_min);

    bool hystart_;
    double w_max_ = 0.0;
    double k_s_ = 0.0;
    SimTime epoch_start_ = -1;
    SimTime last_ce_cut_ = -1;
    static constexpr double kBeta = 0.7;
    static constexpr double kC = 0.4;
};

class BbrLiteCc : public CcAlgorithm {
  public:
    enum class Phase : std::uint8_t { Startup, Drain, ProbeBw, ProbeRtt };

    void on_ack(CcState&, const AckInfo&, SimTime) override;
    void on_loss(CcState&, LossCause, SimTime) override;
    void on_ecn_echo(CcState&, std::uint32_t, std::uint32_t, SimTime) override;
    void on_recovery_exit(CcState&, SimTime) override;
    void update_pacing(CcState&) override;
    const char* phase(const CcState&) const override;
    const char* name() const override { return "bbr"; }

    double btl_bw_bps() const;
    SimTime rt_prop() const { return rt_prop_; }
    Phase bbr_phase() const { return phase_; }

  private:
    double bdp_bytes() const;
    double pacing_gain() const;
    double cwnd_gain() const;
    void advance_phase(CcState& cc, SimTime now, bool rt_prop_expired);

    static constexpr double kStartupGain = 2.89;  // 2/ln2
    static constexpr int kBwWindowRounds = 10;
    static constexpr SimTime kRtPropWindow = 10 * kSecond;
    static constexpr SimTime kProbeRttDuration = 200 * kMillisecond;
    static constexpr double kCycle[8] = {1.25, 0.75, 1, 1, 1, 1, 1, 1};

    std::deque<std::pair<std::uint64_t, double>> bw_samples_;  // (round, bps)
    SimTime rt_prop_ = std::numeric_limits<SimTime>::max();
    SimTime rt_prop_stamp_ = 0;

    std::uint64_t round_count_ = 0;
    std::uint64_t next_round_delivered_ = 0;
    bool round_advanced_ = false;

    double full_bw_ = 0.0;
    int full_bw_count_ = 0;
    bool filled_pipe_ = false;

    Phase phase_ = Phase::Startup;
    int cycle_index_ = 0;
    SimTime cycle_stamp_ = 0;
    SimTime probe_rtt_done_ = 0;
    SimTime last_ce_jump_ = -1;

    double prior_cwnd_ = 0.0;
    bool in_recovery_ = false;
};

}  // namespace crossim
