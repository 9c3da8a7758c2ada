#include "metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace crossim {

DistSummary summarize(std::vector<double> values) {
    DistSummary d;
    if (values.empty()) return d;
    d.count = values.size();
    d.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    std::sort(values.begin(), values.end());
    auto pct = [&](double p) {
        double idx = p * static_cast<double>(values.size() - 1);
        size_t lo = static_cast<size_t>(idx);
        size_t hi = std::min(lo + 1, values.size() - 1);
        double frac = idx - static_cast<double>(lo);
        return values[lo] * (1.0 - frac) + values[hi] * frac;
    };
    d.p50 = pct(0.50);
    d.p95 = pct(0.95);
    d.p99 = pct(0.99);
    return d;
}

namespace {

MetricSeries rate_series(const std::string& name, const std::vector<std::pair<SimTime, double>>& bytes_at,
                         SimTime horizon, SimTime window) {
    MetricSeries s;
    s.name = name;
    s.unit = "bps";
    if (window <= 0) throw std::invalid_argument("rate_series: window must be positive");
    size_t nwin = static_cast<size_t>((horizon + window - 1) / window);
    std::vector<double> acc(nwin, 0.0);
    for (const auto& [t, b] : bytes_at) {
        size_t w = static_cast<size_t>(std::min<SimTime>(t / window, static_cast<SimTime>(nwin) - 1));
        acc[w] += b;
    }
    for (size_t w = 0; w < nwin; ++w) {
        s.samples.emplace_back(static_cast<SimTime>(w) * window, acc[w] * 8.0 / to_s(window));
    }
    return s;
}

}  // namespace

MetricSeries throughput_series(const std::vector<TransportLogEntry>& tx_log, SimTime horizon,
                               SimTime window) {
    std::vector<std::pair<SimTime, double>> bytes_at;
    for (const auto& e : tx_log) {
        if (e.event == TpEvent::Send || e.event == TpEvent::Retransmit) {
            bytes_at.emplace_back(e.t, static_cast<double>(e.size));
        }
    }
    return rate_series("throughput", bytes_at, horizon, window);
}

MetricSeries goodput_series(const std::vector<Receiver::Arrival>& rx_log, SimTime horizon,
                            SimTime window) {
    std::vector<std::pair<SimTime, double>> bytes_at;
    for (const auto& a : rx_log) {
        if (a.newly_inorder > 0) bytes_at.emplace_back(a.t, static_cast<double>(a.newly_inorder));
    }
    return rate_series("goodput", bytes_at, horizon, window);
}

JitterStats jitter_stats(const std::vector<Receiver::Arrival>& rx_log) {
    JitterStats j;
    j.abs_dev_series.name = "jitter_abs_dev";
    j.abs_dev_series.unit = "us";
    j.smoothed_series.name = "jitter_rfc3550";
    j.smoothed_series.unit = "us";
    if (rx_log.size() < 2) return j;

    // Nominal period taken as the mean inter-arrival of the stream.
    double span = to_us(rx_log.back().t - rx_log.front().t);
    double nominal = span / static_cast<double>(rx_log.size() - 1);

    double sum_abs = 0.0;
    double smoothed = 0.0;
    for (size_t i = 1; i < rx_log.size(); ++i) {
        double ia = to_us(rx_log[i].t - rx_log[i - 1].t);
        double dev = std::abs(ia - nominal);
        sum_abs += dev;
        j.abs_dev_series.samples.emplace_back(rx_log[i].t, dev);
        // Transit-time difference estimator.
        double d = std::abs(to_us((rx_log[i].t - rx_log[i].sent_at) -
                                  (rx_log[i - 1].t - rx_log[i - 1].sent_at)));
        smoothed += (d - smoothed) / 16.0;
        j.smoothed_series.samples.emplace_back(rx_log[i].t, smoothed);
    }
    j.mean_abs_dev_us = sum_abs / static_cast<double>(rx_log.size() - 1);
    j.rfc3550_us = smoothed;
    return j;
}

QueueStats queue_stats(const std::vector<QueueEvent>& log) {
    QueueStats q;
    std::vector<double> sojourns_us;
    for (const auto& e : log) {
        q.occupancy.samples.emplace_back(e.t, static_cast<double>(e.occupancy));
        switch (e.type) {
            case QueueEventType::Enqueue: ++q.enqueued; break;
            case QueueEventType::Dequeue:
                ++q.delivered;
                sojourns_us.push_back(to_us(e.sojourn));
                break;
            case QueueEventType::DropAqm: ++q.drops_aqm; break;
            case QueueEventType::DropOverflow: ++q.drops_overflow; break;
            case QueueEventType::Mark: ++q.marks; break;
        }
    }
    q.occupancy.name = "queue_occupancy";
    q.occupancy.unit = "bytes";
    q.qdelay_us = summarize(std::move(sojourns_us));
    return q;
}

SessionQoe session_qoe(const std::vector<QoeSegment>& qoe_log, const Player& player,
                       SimTime horizon) {
    if (qoe_log.empty()) throw std::runtime_error("session_qoe: no segments completed");
    SessionQoe s;
    s.segments = static_cast<int>(qoe_log.size());
    double vmaf_sum = 0.0;
    double level_sum = 0.0;
    for (size_t i = 0; i < qoe_log.size(); ++i) {
        vmaf_sum += qoe_log[i].vmaf;
        level_sum += qoe_log[i].level;
        if (i > 0 && qoe_log[i].level != qoe_log[i - 1].level) ++s.level_switch_count;
    }
    // Segments share one duration, so the duration-weighted mean reduces to
    // the arithmetic mean.
    s.mean_vmaf = vmaf_sum / static_cast<double>(qoe_log.size());
    s.mean_level = level_sum / static_cast<double>(qoe_log.size());
    s.rebuffer_duration_s = player.rebuffer_duration_s(horizon);
    s.rebuffer_count = player.rebuffer_count();
    s.startup_delay_s = player.startup_done_at() >= 0 ? to_s(player.startup_done_at()) : to_s(horizon);
    return s;
}

}  // namespace crossim
