#pragma once

#include <cstdint>
#include <optional>

#include "sim_time.hpp"

namespace crossim {

enum class AqmKind : std::uint8_t { DropTail, Red, Ared, Codel, L4s };
enum class ActionMode : std::uint8_t { Drop, Mark };

// ---------------------------------------------------------------------------
// RED / ARED. Thresholds and the average are byte quantities; `count` stays
// in packets.

struct RedConfig {
    double min_th = 0.0;  // bytes
    double max_th = 0.0;  // bytes
    double p_max = 0.1;
    double w_q = 0.002;
};

struct RedState {
    double avg = 0.0;
    std::int64_t count = 0;  // packets accepted since the last act, RED region only
};

// EWMA of the queue length: (1 - w_q) * oldavg + w_q * current_queue_len.
double update_avg(double oldavg, double current_queue_len, double w_q);

// Probability that RED acts on an arrival given the updated average.
// Below min_th: 0. At or above max_th: 1. In between:
//   p_b = p_max * (avg - min_th) / (max_th - min_th)
//   p_a = p_b / (1 - count * p_b), saturating at 1 once count*p_b >= 1.
double red_act_probability(double avg, std::int64_t count, const RedConfig& cfg);

enum class RedDecision : std::uint8_t { Accept, Act };

class RandomStream;

// Applies the probability above with one coin flip and maintains `count`.
// `state.avg` must already be updated for this arrival.
RedDecision red_decision(RedState& state, const RedConfig& cfg, RandomStream& coin);

struct AredConfig {
    RedConfig red;           // red.p_max seeds the adaptive variable
    SimTime interval = kSecond / 2;
    double target_low = 0.0;   // bytes; defaulted inside (min_th, max_th)
    double target_high = 0.0;  // bytes
    std::optional<double> alpha_inc;  // unset: min(0.01, max_p / 4)
    double beta_dec = 0.9;
};

struct AredState {
    double max_p = 0.0;
};

// Periodic max_p adaptation keeping avg inside [target_low, target_high].
void ared_adapt(AredState& state, const AredConfig& cfg, double avg);

// ---------------------------------------------------------------------------
// CoDel (sojourn-delay control law, actions spaced interval/sqrt(count)).

struct CodelConfig {
    SimTime target = 5 * kMillisecond;
    SimTime interval = 100 * kMillisecond;
};

struct CodelState {
    SimTime first_above_time = 0;
    SimTime drop_next = 0;
    std::uint32_t count = 0;
    std::uint32_t lastcount = 0;
    bool dropping = false;
};

SimTime codel_control_law(SimTime t, SimTime interval, std::uint32_t count);

// ---------------------------------------------------------------------------
// L4S delay-threshold marking.

struct L4sConfig {
    SimTime low_th = 10 * kMillisecond;
    SimTime high_th = 25 * kMillisecond;
    double alpha = 0.25;
    SimTime dt = kMillisecond;  // update period of the probability EWMA
};

struct L4sState {
    double p_mark = 0.0;
    std::optional<SimTime> last_update;
};

// Instantaneous ramp position in [0,1] between the two thresholds.
double l4s_temp(SimTime qdelay, const L4sConfig& cfg);

// Action probability for the packet at the queue head. 0 at or below low_th,
// 1 at or above high_th; in between, an EWMA of the ramp refreshed at most
// once per cfg.dt.
double l4s_probability(SimTime qdelay, const L4sConfig& cfg, L4sState& state, SimTime now);

// One discipline selection with the parameters it needs.
struct AqmSetup {
    AqmKind kind = AqmKind::DropTail;
    ActionMode mode = ActionMode::Drop;  // DropTail ignores the mode
    RedConfig red;
    AredConfig ared;
    CodelConfig codel;
    L4sConfig l4s;
};

}  // namespace crossim
