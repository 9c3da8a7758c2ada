#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "app.hpp"
#include "rlc_queue.hpp"
#include "sim_time.hpp"
#include "transport.hpp"

namespace crossim {

struct MetricSeries {
    std::string name;
    std::string unit;
    std::vector<std::pair<SimTime, double>> samples;
};

struct DistSummary {
    double mean = 0.0;
    double p50 = 0.0;
    double p95 = 0.0;
    double p99 = 0.0;
    std::uint64_t count = 0;
};

DistSummary summarize(std::vector<double> values);

struct SessionQoe {
    double mean_vmaf = 0.0;
    double rebuffer_duration_s = 0.0;
    int rebuffer_count = 0;
    double startup_delay_s = 0.0;
    double mean_level = 0.0;
    int level_switch_count = 0;
    int segments = 0;
};

// Windowed rate series. Throughput counts every transmitted byte including
// retransmissions; goodput counts bytes as they become contiguous at the
// receiver.
MetricSeries throughput_series(const std::vector<TransportLogEntry>& tx_log, SimTime horizon,
                               SimTime window);
MetricSeries goodput_series(const std::vector<Receiver::Arrival>& rx_log, SimTime horizon,
                            SimTime window);

struct JitterStats {
    double mean_abs_dev_us = 0.0;   // |inter-arrival - nominal period|
    double rfc3550_us = 0.0;        // smoothed estimate, final value
    MetricSeries abs_dev_series;    // per-packet deviations
    MetricSeries smoothed_series;
};

JitterStats jitter_stats(const std::vector<Receiver::Arrival>& rx_log);

struct QueueStats {
    MetricSeries occupancy;   // bytes, sampled at every queue event
    DistSummary qdelay_us;    // sojourn of delivered packets
    std::uint64_t drops_aqm = 0;
    std::uint64_t drops_overflow = 0;
    std::uint64_t marks = 0;
    std::uint64_t delivered = 0;
    std::uint64_t enqueued = 0;
};

QueueStats queue_stats(const std::vector<QueueEvent>& log);

// Duration-weighted quality plus stall accounting for one session.
// Throws when no segment completed.
SessionQoe session_qoe(const std::vector<QoeSegment>& qoe_log, const Player& player,
                       SimTime horizon);

}  // namespace crossim
