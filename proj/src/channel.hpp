#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "packet.hpp"
#include "random.hpp"
#include "sim_time.hpp"

namespace crossim {

// One step of the bottleneck trace. Active from `t` until the next sample.
struct TraceSample {
    SimTime t = 0;
    double capacity_bps = 0.0;
    SimTime base_owd = 0;        // one-way propagation delay
    double mac_loss_prob = 0.0;  // per transmission attempt
    int max_harq_retx = 3;
    SimTime harq_retx_delay = kMillisecond;
};

struct LosNlosParams {
    double los_capacity_bps = 0.0;
    double nlos_capacity_bps = 0.0;
    double los_duration_s = 0.0;
    double nlos_duration_s = 0.0;
    double los_loss_prob = 0.0;
    double nlos_loss_prob = 0.0;
    SimTime base_owd = 4 * kMillisecond;
    double total_duration_s = 0.0;
    int max_harq_retx = 3;
    SimTime harq_retx_delay = kMillisecond;
};

// Right-continuous step function over TraceSamples; the first sample sits at
// t = 0 and the trace is never empty.
class ChannelTrace {
  public:
    explicit ChannelTrace(std::vector<TraceSample> samples);

    const TraceSample& at(SimTime t) const;
    // Earliest time > t with capacity > 0, if any.
    std::optional<SimTime> next_active_time(SimTime t) const;
    const std::vector<TraceSample>& samples() const { return samples_; }

    // Mean capacity of the step function over [0, horizon).
    double mean_capacity_bps(SimTime horizon) const;

    // CSV rows: t_us,capacity_bps,base_owd_us,mac_loss_prob,max_harq_retx,harq_retx_delay_us
    // Header row optional. Throws std::runtime_error naming the bad line.
    static ChannelTrace load(std::istream& in);
    static ChannelTrace load_file(const std::string& path);

    // Alternating LoS/NLoS step trace, starting in LoS.
    static ChannelTrace synth_los_nlos(const LosNlosParams& p);

  private:
    std::vector<TraceSample> samples_;
};

struct DeliveryOutcome {
    bool delivered = false;
    SimTime deliver_at = 0;       // valid when delivered
    SimTime link_busy_until = 0;  // airtime consumed incl. failed attempts
    int attempts = 1;
};

// Serializes `pkt` at the capacity in force at `now`, then runs per-attempt
// Bernoulli loss with bounded retries; each failed attempt adds one retry
// delay, and the packet is lost once the retry budget is exhausted.
DeliveryOutcome transmit(const Packet& pkt, SimTime now, const ChannelTrace& trace,
                         RandomStream& mac_loss_stream);

}  // namespace crossim
