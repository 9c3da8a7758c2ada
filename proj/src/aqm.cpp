#include "aqm.hpp"

#include <algorithm>
#include <cmath>

#include "random.hpp"

namespace crossim {

double update_avg(double oldavg, double current_queue_len, double w_q) {
    return (1.0 - w_q) * oldavg + w_q * current_queue_len;
}

double red_act_probability(double avg, std::int64_t count, const RedConfig& cfg) {
    if (avg < cfg.min_th) return 0.0;
    if (avg >= cfg.max_th) return 1.0;
    double p_b = cfg.p_max * (avg - cfg.min_th) / (cfg.max_th - cfg.min_th);
    double denom = 1.0 - static_cast<double>(count) * p_b;
    if (denom <= 0.0) return 1.0;
    return std::min(p_b / denom, 1.0);
}

RedDecision red_decision(RedState& state, const RedConfig& cfg, RandomStream& coin) {
    if (state.avg < cfg.min_th) return RedDecision::Accept;
    if (state.avg >= cfg.max_th) {
        state.count = 0;
        return RedDecision::Act;
    }
    double p_a = red_act_probability(state.avg, state.count, cfg);
    if (coin.bernoulli(p_a)) {
        state.count = 0;
        return RedDecision::Act;
    }
    ++state.count;
    return RedDecision::Accept;
}

void ared_adapt(AredState& state, const AredConfig& cfg, double avg) {
    if (avg > cfg.target_high) {
        double inc = cfg.alpha_inc ? *cfg.alpha_inc : std::min(0.01, state.max_p / 4.0);
        state.max_p = std::min(state.max_p + inc, 0.5);
    } else if (avg < cfg.target_low) {
        state.max_p = std::max(state.max_p * cfg.beta_dec, 0.01);
    }
}

SimTime codel_control_law(SimTime t, SimTime interval, std::uint32_t count) {
    return t + static_cast<SimTime>(static_cast<double>(interval) /
                                    std::sqrt(static_cast<double>(count)));
}

double l4s_temp(SimTime qdelay, const L4sConfig& cfg) {
    return static_cast<double>(qdelay - cfg.low_th) / static_cast<double>(cfg.high_th - cfg.low_th);
}

double l4s_probability(SimTime qdelay, const L4sConfig& cfg, L4sState& state, SimTime now) {
    // The probability state is a time EWMA of the ramp position, refreshed at
    // most once per dt whatever the region, so it decays back toward zero
    // through quiet periods instead of acting on stale congestion.
    if (!state.last_update || now - *state.last_update >= cfg.dt) {
        double temp = std::clamp(l4s_temp(qdelay, cfg), 0.0, 1.0);
        state.p_mark = std::clamp(cfg.alpha * temp + (1.0 - cfg.alpha) * state.p_mark, 0.0, 1.0);
        state.last_update = now;
    }
    if (qdelay <= cfg.low_th) return 0.0;
    if (qdelay >= cfg.high_th) return 1.0;
    return state.p_mark;
}

}  // namespace crossim
