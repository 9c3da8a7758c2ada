#include "cc.hpp"

#include <algorithm>
#include <cmath>

namespace crossim {

double cubic_window(double t_s, double w_max_bytes, double mss_bytes) {
    const double c = 0.4;
    const double beta = 0.7;
    double w_max_seg = w_max_bytes / mss_bytes;
    double k = std::cbrt(w_max_seg * (1.0 - beta) / c);
    double w_seg = c * (t_s - k) * (t_s - k) * (t_s - k) + w_max_seg;
    return std::max(w_seg * mss_bytes, mss_bytes);
}

void CcAlgorithm::on_ecn_echo(CcState&, std::uint32_t, std::uint32_t, SimTime) {}
void CcAlgorithm::on_recovery_exit(CcState&, SimTime) {}

void CcAlgorithm::update_pacing(CcState& cc) {
    if (cc.srtt <= 0) {
        cc.pacing_rate_bps = 0.0;
        return;
    }
    // Window-based pacing, with headroom so pacing never starves the window:
    // 2x while in slow start, 1.2x afterwards.
    double factor = cc.cwnd < cc.ssthresh ? 2.0 : 1.2;
    cc.pacing_rate_bps = factor * cc.cwnd * 8.0 / to_s(cc.srtt);
}

const char* CcAlgorithm::phase(const CcState& cc) const {
    return cc.cwnd < cc.ssthresh ? "slow_start" : "cong_avoid";
}

std::unique_ptr<CcAlgorithm> make_cc(CcAlgo algo, std::uint32_t /*mss*/, const CcOptions& opts) {
    switch (algo) {
        case CcAlgo::Reno: return std::make_unique<RenoCc>();
        case CcAlgo::Cubic: return std::make_unique<CubicCc>(opts.hystart);
        case CcAlgo::BbrLite: return std::make_unique<BbrLiteCc>();
        case CcAlgo::DctcpEcn: return std::make_unique<DctcpCc>(opts.dctcp_gain);
    }
    return nullptr;
}

// ---------------------------------------------------------------------- Reno

namespace {

void aimd_grow(CcState& cc, const AckInfo& info) {
    double mss = cc.mss;
    if (cc.cwnd < cc.ssthresh) {
        cc.cwnd += std::min<double>(info.newly_acked_bytes, mss);
    } else {
        cc.cwnd += mss * static_cast<double>(info.newly_acked_bytes) / cc.cwnd;
    }
}

}  // namespace

void RenoCc::on_ack(CcState& cc, const AckInfo& info, SimTime) {
    // Window validation: a flow that never fills its window does not grow it.
    if (info.cwnd_limited) aimd_grow(cc, info);
}

void RenoCc::on_loss(CcState& cc, LossCause cause, SimTime) {
    cc.ssthresh = std::max(cc.cwnd / 2.0, 2.0 * cc.mss);
    cc.cwnd = cause == LossCause::Rto ? cc.mss : cc.ssthresh;
}

void RenoCc::on_ecn_echo(CcState& cc, std::uint32_t newly_ce, std::uint32_t, SimTime now) {
    // Classic ECN response: at most one window reduction per RTT, no retransmit.
    if (newly_ce == 0) return;
    if (last_ce_cut_ >= 0 && now - last_ce_cut_ < std::max<SimTime>(cc.srtt, kMillisecond)) return;
    last_ce_cut_ = now;
    cc.ssthresh = std::max(cc.cwnd / 2.0, 2.0 * cc.mss);
    cc.cwnd = cc.ssthresh;
}

// --------------------------------------------------------------------- DCTCP

void DctcpCc::on_ack(CcState& cc, const AckInfo& info, SimTime) {
    if (info.cwnd_limited) aimd_grow(cc, info);
    if (window_start_cwnd_ <= 0.0) window_start_cwnd_ = cc.cwnd;
    window_acked_ += static_cast<double>(info.newly_acked_bytes);
    ce_in_window_ += info.newly_ce;
    recv_in_window_ += info.newly_recv_pkts;
    if (window_acked_ < window_start_cwnd_) return;
    // One observation window (~RTT) completed.
    double f = recv_in_window_ > 0
                   ? static_cast<double>(ce_in_window_) / static_cast<double>(recv_in_window_)
                   : 0.0;
    alpha_ = (1.0 - gain_) * alpha_ + gain_ * f;
    if (ce_in_window_ > 0) {
        cc.cwnd = std::max(cc.cwnd * (1.0 - alpha_ / 2.0), 2.0 * cc.mss);
        cc.ssthresh = cc.cwnd;
    }
    window_acked_ = 0.0;
    ce_in_window_ = 0;
    recv_in_window_ = 0;
    window_start_cwnd_ = cc.cwnd;
}

void DctcpCc::on_loss(CcState& cc, LossCause cause, SimTime) {
    cc.ssthresh = std::max(cc.cwnd / 2.0, 2.0 * cc.mss);
    cc.cwnd = cause == LossCause::Rto ? cc.mss : cc.ssthresh;
}

void DctcpCc::on_ecn_echo(CcState& cc, std::uint32_t newly_ce, std::uint32_t, SimTime) {
    // First congestion signal ends slow start; the per-window reduction is
    // handled in on_ack.
    if (newly_ce > 0 && cc.cwnd < cc.ssthresh) cc.ssthresh = cc.cwnd;
}

// --------------------------------------------------------------------- CUBIC

void CubicCc::on_ack(CcState& cc, const AckInfo& info, SimTime now) {
    double mss = cc.mss;
    if (!info.cwnd_limited) {
        // Frozen while the application is the bottleneck; the growth epoch
        // restarts once the window binds again.
        epoch_start_ = -1;
        return;
    }
    if (cc.cwnd < cc.ssthresh) {
        cc.cwnd += std::min<double>(info.newly_acked_bytes, mss);
        if (hystart_ && cc.srtt > 0 && cc.min_rtt != std::numeric_limits<SimTime>::max() &&
            cc.srtt > cc.min_rtt + cc.min_rtt / 8) {
            cc.ssthresh = cc.cwnd;  // delay rise: leave slow start
        }
        return;
    }
    if (epoch_start_ < 0) {
        epoch_start_ = now;
        if (cc.cwnd < w_max_) {
            k_s_ = std::cbrt((w_max_ - cc.cwnd) / (kC * mss));
        } else {
            w_max_ = cc.cwnd;
            k_s_ = 0.0;
        }
    }
    double t = to_s(now - epoch_start_) + to_s(cc.srtt);
    double target = kC * mss * (t - k_s_) * (t - k_s_) * (t - k_s_) + w_max_;
    // TCP-friendly floor (AIMD estimate at beta 0.7).
    if (cc.srtt > 0) {
        double w_est = w_max_ * kBeta + 3.0 * (1.0 - kBeta) / (1.0 + kBeta) * (t / to_s(cc.srtt)) * mss;
        target = std::max(target, w_est);
    }
    if (target > cc.cwnd) {
        cc.cwnd += (target - cc.cwnd) * static_cast<double>(info.newly_acked_bytes) / cc.cwnd;
    }
}

void CubicCc::reduce(CcState& cc, SimTime, bool to_min) {
    if (cc.cwnd < w_max_) {
        w_max_ = cc.cwnd * (1.0 + kBeta) / 2.0;  // fast convergence
    } else {
        w_max_ = cc.cwnd;
    }
    cc.ssthresh = std::max(cc.cwnd * kBeta, 2.0 * cc.mss);
    cc.cwnd = to_min ? cc.mss : cc.ssthresh;
    epoch_start_ = -1;
}

void CubicCc::on_loss(CcState& cc, LossCause cause, SimTime now) {
    reduce(cc, now, cause == LossCause::Rto);
}

void CubicCc::on_ecn_echo(CcState& cc, std::uint32_t newly_ce, std::uint32_t, SimTime now) {
    if (newly_ce == 0) return;
    if (last_ce_cut_ >= 0 && now - last_ce_cut_ < std::max<SimTime>(cc.srtt, kMillisecond)) return;
    last_ce_cut_ = now;
    reduce(cc, now, false);
}

// ------------------------------------------------------------------ BBR-lite

constexpr double BbrLiteCc::kCycle[8];

double BbrLiteCc::btl_bw_bps() const {
    double best = 0.0;
    for (const auto& [round, bps] : bw_samples_) best = std::max(best, bps);
    return best;
}

double BbrLiteCc::bdp_bytes() const {
    if (rt_prop_ == std::numeric_limits<SimTime>::max()) return 0.0;
    double bw = btl_bw_bps();
    if (bw <= 0.0) return 0.0;
    return bw / 8.0 * to_s(rt_prop_);
}

double BbrLiteCc::pacing_gain() const {
    switch (phase_) {
        case Phase::Startup: return kStartupGain;
        case Phase::Drain: return 1.0 / kStartupGain;
        case Phase::ProbeBw: return kCycle[cycle_index_];
        case Phase::ProbeRtt: return 1.0;
    }
    return 1.0;
}

double BbrLiteCc::cwnd_gain() const {
    switch (phase_) {
        case Phase::Startup:
        case Phase::Drain: return kStartupGain;
        default: return 2.0;
    }
}

const char* BbrLiteCc::phase(const CcState&) const {
    switch (phase_) {
        case Phase::Startup: return "bbr_startup";
        case Phase::Drain: return "bbr_drain";
        case Phase::ProbeBw: return "bbr_probe_bw";
        case Phase::ProbeRtt: return "bbr_probe_rtt";
    }
    return "?";
}

void BbrLiteCc::advance_phase(CcState& cc, SimTime now, bool rt_prop_expired) {
    switch (phase_) {
        case Phase::Startup:
            if (round_advanced_) {
                if (btl_bw_bps() >= full_bw_ * 1.25) {
                    full_bw_ = btl_bw_bps();
                    full_bw_count_ = 0;
                } else if (++full_bw_count_ >= 3) {
                    filled_pipe_ = true;
                    phase_ = Phase::Drain;
                }
            }
            break;
        case Phase::Drain:
            if (cc.bytes_in_flight <= static_cast<std::uint64_t>(bdp_bytes())) {
                phase_ = Phase::ProbeBw;
                cycle_index_ = 2;
                cycle_stamp_ = now;
            }
            break;
        case Phase::ProbeBw:
            if (rt_prop_ != std::numeric_limits<SimTime>::max() && now - cycle_stamp_ >= rt_prop_) {
                cycle_index_ = (cycle_index_ + 1) % 8;
                cycle_stamp_ = now;
            }
            break;
        case Phase::ProbeRtt:
            if (now >= probe_rtt_done_) {
                rt_prop_stamp_ = now;
                phase_ = filled_pipe_ ? Phase::ProbeBw : Phase::Startup;
                cycle_index_ = 2;
                cycle_stamp_ = now;
            }
            break;
    }
    // rt_prop gone stale: drain to re-measure the propagation delay.
    if (phase_ != Phase::ProbeRtt && rt_prop_expired) {
        phase_ = Phase::ProbeRtt;
        probe_rtt_done_ = now + kProbeRttDuration;
    }
}

void BbrLiteCc::on_ack(CcState& cc, const AckInfo& info, SimTime now) {
    round_advanced_ = false;
    // ProbeRTT drains the pipe on purpose; its samples say nothing about the
    // bottleneck, so the rate filter and round clock freeze for its duration.
    bool sampling = phase_ != Phase::ProbeRtt;
    if (sampling && info.acked_delivered_snapshot >= next_round_delivered_) {
        ++round_count_;
        next_round_delivered_ = info.delivered_total;
        round_advanced_ = true;
    }
    if (sampling && info.delivery_rate_bps > 0.0 &&
        (!info.app_limited || info.delivery_rate_bps > btl_bw_bps())) {
        bw_samples_.emplace_back(round_count_, info.delivery_rate_bps);
        while (!bw_samples_.empty() &&
               bw_samples_.front().first + kBwWindowRounds < round_count_) {
            bw_samples_.pop_front();
        }
    }
    bool rt_prop_expired = rt_prop_stamp_ > 0 && now - rt_prop_stamp_ > kRtPropWindow;
    if (info.rtt_sample > 0 && (info.rtt_sample <= rt_prop_ || rt_prop_expired)) {
        rt_prop_ = info.rtt_sample;
        rt_prop_stamp_ = now;
    }
    advance_phase(cc, now, rt_prop_expired);

    double bdp = bdp_bytes();
    double min_cwnd = 4.0 * cc.mss;
    if (phase_ == Phase::ProbeRtt) {
        cc.cwnd = std::min(cc.cwnd, min_cwnd);
    } else if (in_recovery_) {
        cc.cwnd = std::max<double>(static_cast<double>(cc.bytes_in_flight) + cc.mss, min_cwnd);
    } else if (bdp > 0.0) {
        double target = std::max(cwnd_gain() * bdp, min_cwnd);
        if (cc.cwnd < target) {
            cc.cwnd = std::min(cc.cwnd + static_cast<double>(info.newly_acked_bytes), target);
        } else {
            cc.cwnd = target;
        }
    } else {
        cc.cwnd += static_cast<double>(info.newly_acked_bytes);
    }
}

void BbrLiteCc::on_loss(CcState& cc, LossCause cause, SimTime) {
    if (!in_recovery_) prior_cwnd_ = cc.cwnd;
    in_recovery_ = true;
    if (cause == LossCause::Rto) {
        cc.cwnd = cc.mss;
    } else {
        cc.cwnd = std::max<double>(static_cast<double>(cc.bytes_in_flight) + cc.mss, 4.0 * cc.mss);
    }
}

void BbrLiteCc::on_recovery_exit(CcState& cc, SimTime) {
    if (!in_recovery_) return;
    in_recovery_ = false;
    cc.cwnd = std::max(cc.cwnd, prior_cwnd_);
}

void BbrLiteCc::on_ecn_echo(CcState&, std::uint32_t newly_ce, std::uint32_t, SimTime now) {
    // A congestion signal pulls the gain cycle into its draining step early.
    if (newly_ce == 0 || phase_ != Phase::ProbeBw) return;
    if (kCycle[cycle_index_] <= 0.75) return;
    if (last_ce_jump_ >= 0 && rt_prop_ != std::numeric_limits<SimTime>::max() &&
        now - last_ce_jump_ < rt_prop_)
        return;
    last_ce_jump_ = now;
    cycle_index_ = 1;
    cycle_stamp_ = now;
}

void BbrLiteCc::update_pacing(CcState& cc) {
    double bw = btl_bw_bps();
    cc.pacing_rate_bps = bw > 0.0 ? pacing_gain() * bw : 0.0;
}

}  // namespace crossim
