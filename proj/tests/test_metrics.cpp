#include <doctest.h>

#include <cmath>

#include "metrics.hpp"

using namespace crossim;

namespace {

Receiver::Arrival arrival(SimTime t, std::uint64_t seq, std::uint32_t size,
                          std::uint32_t newly, SimTime sent_at) {
    return Receiver::Arrival{t, seq, size, newly, false, sent_at};
}

}  // namespace

TEST_CASE("summaries: mean and percentiles") {
    auto d = summarize({1.0, 2.0, 3.0, 4.0, 5.0});
    CHECK(d.mean == doctest::Approx(3.0));
    CHECK(d.p50 == doctest::Approx(3.0));
    CHECK(d.count == 5);
    CHECK(summarize({}).count == 0);
}

TEST_CASE("throughput counts retransmissions, goodput counts unique in-order bytes") {
    std::vector<TransportLogEntry> tx;
    std::vector<Receiver::Arrival> rx;
    // Two sends and one retransmission of the first packet.
    tx.push_back({0, TpEvent::Send, 0, 1200, 0, 0, 0, nullptr});
    tx.push_back({10 * kMillisecond, TpEvent::Send, 1200, 1200, 0, 0, 0, nullptr});
    tx.push_back({20 * kMillisecond, TpEvent::Retransmit, 0, 1200, 0, 0, 0, nullptr});
    rx.push_back(arrival(25 * kMillisecond, 1200, 1200, 0, 10 * kMillisecond));  // out of order
    rx.push_back(arrival(30 * kMillisecond, 0, 1200, 2400, 20 * kMillisecond));  // fills the hole

    SimTime horizon = kSecond;
    auto thr = throughput_series(tx, horizon, horizon);
    auto good = goodput_series(rx, horizon, horizon);
    REQUIRE(thr.samples.size() == 1);
    REQUIRE(good.samples.size() == 1);
    CHECK(thr.samples[0].second == doctest::Approx(3600 * 8.0));
    CHECK(good.samples[0].second == doctest::Approx(2400 * 8.0));
    // goodput <= throughput in every window
    CHECK(good.samples[0].second <= thr.samples[0].second);
}

TEST_CASE("lossless equal-rate logs give identical throughput and goodput") {
    std::vector<TransportLogEntry> tx;
    std::vector<Receiver::Arrival> rx;
    for (int i = 0; i < 100; ++i) {
        SimTime t = i * 10 * kMillisecond;
        tx.push_back({t, TpEvent::Send, static_cast<std::uint64_t>(i) * 1200, 1200, 0, 0, 0,
                      nullptr});
        rx.push_back(arrival(t + 4 * kMillisecond, static_cast<std::uint64_t>(i) * 1200, 1200,
                             1200, t));
    }
    SimTime horizon = kSecond;
    auto thr = throughput_series(tx, horizon, 100 * kMillisecond);
    auto good = goodput_series(rx, horizon, 100 * kMillisecond);
    REQUIRE(thr.samples.size() == good.samples.size());
    double thr_total = 0, good_total = 0;
    for (std::size_t i = 0; i < thr.samples.size(); ++i) {
        thr_total += thr.samples[i].second;
        good_total += good.samples[i].second;
    }
    CHECK(thr_total == doctest::Approx(good_total));
}

TEST_CASE("jitter: perfectly periodic arrivals score zero") {
    std::vector<Receiver::Arrival> rx;
    for (int i = 0; i < 50; ++i)
        rx.push_back(arrival(i * 10 * kMillisecond, i, 100, 100, i * 10 * kMillisecond - 4000));
    auto j = jitter_stats(rx);
    CHECK(j.mean_abs_dev_us == doctest::Approx(0.0));
    CHECK(j.rfc3550_us == doctest::Approx(0.0));
}

TEST_CASE("jitter: alternating +-1 ms offsets deviate by 2 ms") {
    std::vector<Receiver::Arrival> rx;
    for (int i = 0; i < 101; ++i) {
        SimTime nominal = i * 10 * kMillisecond;
        SimTime offset = (i % 2 == 0) ? -kMillisecond : kMillisecond;
        rx.push_back(arrival(nominal + offset, i, 100, 100, nominal - 4 * kMillisecond));
    }
    auto j = jitter_stats(rx);
    CHECK(j.mean_abs_dev_us == doctest::Approx(2000.0).epsilon(0.01));
}

TEST_CASE("jitter of a single arrival is empty") {
    std::vector<Receiver::Arrival> rx{arrival(0, 0, 100, 100, 0)};
    auto j = jitter_stats(rx);
    CHECK(j.abs_dev_series.samples.empty());
}

TEST_CASE("queue stats partition counters by cause") {
    std::vector<QueueEvent> log;
    log.push_back({0, QueueEventType::Enqueue, 0, 100, 0, 100});
    log.push_back({1, QueueEventType::Enqueue, 1, 100, 0, 200});
    log.push_back({2, QueueEventType::DropOverflow, 2, 100, 0, 200});
    log.push_back({3, QueueEventType::Dequeue, 0, 100, 3, 100});
    log.push_back({4, QueueEventType::DropAqm, 3, 100, 0, 100});
    log.push_back({5, QueueEventType::Mark, 1, 100, 0, 100});
    log.push_back({6, QueueEventType::Dequeue, 1, 100, 5, 0});
    auto q = queue_stats(log);
    CHECK(q.enqueued == 2);
    CHECK(q.delivered == 2);
    CHECK(q.drops_aqm == 1);
    CHECK(q.drops_overflow == 1);
    CHECK(q.marks == 1);
    CHECK(q.qdelay_us.count == 2);
    CHECK(q.qdelay_us.mean == doctest::Approx(to_us(SimTime(4))));
    CHECK(queue_stats({}).enqueued == 0);
}

TEST_CASE("session qoe: duration-weighted quality and stall totals") {
    Player p(6.0, 2.0);
    std::vector<QoeSegment> log;
    p.on_segment_added(2.0, from_s(0.5));  // playing from 0.5 s

    QoeSegment a;
    a.segment_idx = 0;
    a.level = 0;
    a.vmaf = 31.0;
    log.push_back(a);
    QoeSegment b;
    b.segment_idx = 1;
    b.level = 9;
    b.vmaf = 97.0;
    log.push_back(b);

    p.advance_to(from_s(10.0));  // settle playback state at the horizon
    auto q = session_qoe(log, p, from_s(10.0));
    CHECK(q.mean_vmaf == doctest::Approx(64.0));  // half at 31, half at 97
    CHECK(q.segments == 2);
    CHECK(q.level_switch_count == 1);
    CHECK(q.mean_level == doctest::Approx(4.5));
    CHECK(q.startup_delay_s == doctest::Approx(0.5));
    CHECK(q.rebuffer_count == 1);  // ran dry at 2.5 s and never resumed
    CHECK(q.rebuffer_duration_s == doctest::Approx(7.5));

    CHECK_THROWS(session_qoe({}, p, from_s(10.0)));
}

TEST_CASE("qdelay sanity bound: sojourn below 10x the analytic residence bound") {
    // 1 MB buffer drained at >= 10 Mb/s: residence bound = 0.8 s.
    std::vector<QueueEvent> log;
    log.push_back({0, QueueEventType::Enqueue, 0, 1200, 0, 1200});
    log.push_back({from_s(0.5), QueueEventType::Dequeue, 0, 1200, from_s(0.5), 0});
    auto q = queue_stats(log);
    double bound_us = 10.0 * (1e6 * 8.0 / 10e6) * 1e6;
    CHECK(q.qdelay_us.p99 <= bound_us);
}
