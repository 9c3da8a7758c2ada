#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "cc.hpp"
#include "oracles.hpp"
#include "pipe_harness.hpp"

using namespace crossim;
using pipe_harness::Pipe;

namespace {

AckInfo acked(std::uint64_t bytes, std::uint32_t pkts = 1, std::uint32_t ce = 0) {
    AckInfo a;
    a.newly_acked_bytes = bytes;
    a.newly_acked_pkts = pkts;
    a.newly_recv_pkts = pkts;
    a.newly_ce = ce;
    a.cwnd_limited = true;  // direct-drive tests model a backlogged sender
    return a;
}

}  // namespace

TEST_CASE("reno: slow start adds per-ack, congestion avoidance adds one mss per window") {
    RenoCc reno;
    CcState cc;
    cc.mss = 1200;
    cc.cwnd = 12000;
    cc.ssthresh = 1e12;
    reno.on_ack(cc, acked(1200), 0);
    CHECK(cc.cwnd == 13200);

    cc.cwnd = 120000;
    cc.ssthresh = 1000;
    double before = cc.cwnd;
    for (int i = 0; i < 100; ++i) reno.on_ack(cc, acked(1200), 0);  // one full window
    CHECK(cc.cwnd - before == doctest::Approx(1200).epsilon(0.02));
}

TEST_CASE("reno: multiplicative decrease on dupack, collapse on rto") {
    RenoCc reno;
    CcState cc;
    cc.mss = 1200;
    cc.cwnd = 100000;
    reno.on_loss(cc, LossCause::DupAck, 0);
    CHECK(cc.cwnd == 50000);
    CHECK(cc.ssthresh == 50000);

    cc.cwnd = 100000;
    reno.on_loss(cc, LossCause::Rto, 0);
    CHECK(cc.cwnd == 1200);
    CHECK(cc.ssthresh == 50000);
}

TEST_CASE("cubic: loss sets w_max and scales the window by beta") {
    CubicCc cubic(false);
    CcState cc;
    cc.mss = 1200;
    cc.cwnd = 100000;
    cc.ssthresh = 1000;
    cubic.on_loss(cc, LossCause::DupAck, 0);
    CHECK(cc.cwnd == doctest::Approx(70000));
    CHECK(cubic.w_max() == doctest::Approx(100000));
}

TEST_CASE("cubic window curve: inflection, origin, and symmetry") {
    double mss = 1200;
    double w_max = 100 * mss;
    double k = oracles::cubic_inflection_s(w_max, mss);
    CHECK(cubic_window(k, w_max, mss) == doctest::Approx(w_max));
    CHECK(cubic_window(0.0, w_max, mss) == doctest::Approx(0.7 * w_max));
    CHECK(cubic_window(2.0 * k, w_max, mss) == doctest::Approx(1.3 * w_max));
}

TEST_CASE("cubic window matches the symbolic form within one byte on a grid") {
    int points = 0;
    for (double w_max_pkts : {10.0, 50.0, 200.0, 1000.0}) {
        for (double mss : {1200.0, 1460.0}) {
            double w_max = w_max_pkts * mss;
            double k = oracles::cubic_inflection_s(w_max, mss);
            for (int i = 0; i <= 125; ++i) {
                double t = i * (2.5 * k) / 125.0;  // covers 0, K, 2K and beyond
                double got = cubic_window(t, w_max, mss);
                double want = oracles::cubic_closed_form(t, w_max, mss);
                CHECK(std::abs(got - want) <= 1.0);
                ++points;
            }
        }
    }
    CHECK(points >= 1000);
}

TEST_CASE("dctcp: marked-fraction fixed points") {
    CcState cc;
    cc.mss = 1200;
    cc.cwnd = 120000;
    cc.ssthresh = 1000;

    // Drives windows of ACKs with a fixed marked pattern until alpha settles,
    // then measures the multiplicative factor of a single reduction event,
    // keeping the window large enough that the 2-MSS floor stays out of play.
    auto reduction_ratio = [&](DctcpCc& d, int every_nth_marked, int rounds) {
        for (int round = 0; round < rounds; ++round) {
            double start = cc.cwnd;
            std::uint64_t sent = 0;
            int k = 0;
            while (sent < static_cast<std::uint64_t>(start)) {
                d.on_ack(cc, acked(1200, 1, (k % every_nth_marked == 0) ? 1 : 0), 0);
                sent += 1200;
                ++k;
            }
        }
        cc.cwnd = 1.2e6;  // step away from the floor, alpha already converged
        cc.ssthresh = 1.0;
        double min_ratio = 1.0;
        int k = 0;
        for (int i = 0; i < 4000; ++i) {
            double before = cc.cwnd;
            d.on_ack(cc, acked(1200, 1, (k % every_nth_marked == 0) ? 1 : 0), 0);
            ++k;
            if (cc.cwnd < before) min_ratio = std::min(min_ratio, cc.cwnd / before);
        }
        return min_ratio;
    };

    SUBCASE("all marked: alpha converges to 1, window halves per round") {
        DctcpCc d(1.0 / 16.0);
        double ratio = reduction_ratio(d, 1, 200);
        CHECK(d.alpha() == doctest::Approx(1.0).epsilon(0.02));
        CHECK(ratio == doctest::Approx(0.5).epsilon(0.05));
    }

    SUBCASE("no marks: alpha stays zero and growth is untouched") {
        DctcpCc d(1.0 / 16.0);
        cc.cwnd = 120000;
        double before = cc.cwnd;
        for (int i = 0; i < 100; ++i) d.on_ack(cc, acked(1200), 0);
        CHECK(cc.cwnd > before);
        CHECK(d.alpha() == 0.0);
    }

    SUBCASE("quarter marked: alpha fixed point 0.25, reduction factor 0.875") {
        DctcpCc d(1.0 / 16.0);
        double ratio = reduction_ratio(d, 4, 600);
        CHECK(d.alpha() == doctest::Approx(0.25).epsilon(0.05));
        CHECK(ratio == doctest::Approx(0.875).epsilon(0.03));
    }
}

TEST_CASE("lossless transfer: everything arrives exactly once, srtt = rtt") {
    SenderConfig cfg;
    cfg.algo = CcAlgo::Reno;
    Pipe pipe(cfg, 4 * kMillisecond);
    pipe.sender().app_write(600000);  // 500 packets
    pipe.engine.run_until(10 * kSecond);

    CHECK(pipe.receiver().cum_bytes() == 600000);
    CHECK(pipe.receiver().duplicate_bytes() == 0);
    CHECK(pipe.sender().bytes_retransmitted() == 0);
    for (const auto& s : pipe.sender().srtt_samples()) {
        CHECK(s.first_acked - s.first_sent == 8 * kMillisecond);  // no serialization modeled
    }
}

TEST_CASE("three duplicate acks trigger fast retransmit and one halving") {
    SenderConfig cfg;
    cfg.algo = CcAlgo::Reno;
    Pipe pipe(cfg);
    bool dropped_one = false;
    pipe.drop_filter = [&](const Packet& p) {
        if (!dropped_one && p.seq == 12000 && !p.retransmit) {
            dropped_one = true;
            return true;
        }
        return false;
    };
    pipe.sender().app_write(240000);
    pipe.engine.run_until(5 * kSecond);

    CHECK(pipe.receiver().cum_bytes() == 240000);
    CHECK(pipe.sender().bytes_retransmitted() == 1200);
    bool saw_dupack_loss = false, saw_retransmit = false;
    for (const auto& e : pipe.sender().log()) {
        if (e.event == TpEvent::Loss && e.detail && std::string(e.detail) == "dupack")
            saw_dupack_loss = true;
        if (e.event == TpEvent::Retransmit && e.seq == 12000) saw_retransmit = true;
    }
    CHECK(saw_dupack_loss);
    CHECK(saw_retransmit);
    CHECK(pipe.sender().rto_count() == 0);

    SimTime lost_sample = 0;
    for (const auto& s : pipe.sender().srtt_samples())
        if (s.seq == 12000) lost_sample = s.first_acked - s.first_sent;
    CHECK(lost_sample > 8 * kMillisecond);  // includes the recovery wait
}

TEST_CASE("rto: consecutive expiries back off exponentially") {
    SenderConfig cfg;
    cfg.algo = CcAlgo::Reno;
    cfg.rto_only = true;
    Pipe pipe(cfg);
    int drops_left = 3;
    pipe.drop_filter = [&](const Packet& p) {
        if (p.seq == 0 && drops_left > 0) {
            --drops_left;
            return true;
        }
        return false;
    };
    pipe.sender().app_write(1200);
    pipe.engine.run_until(20 * kSecond);

    CHECK(pipe.receiver().cum_bytes() == 1200);
    std::vector<SimTime> rtos;
    for (const auto& e : pipe.sender().log())
        if (e.event == TpEvent::Rto) rtos.push_back(e.t);
    REQUIRE(rtos.size() == 3);
    CHECK(rtos[2] - rtos[1] == 2 * (rtos[1] - rtos[0]));
}

TEST_CASE("flight limit: in-flight never exceeds cwnd at a send decision") {
    SenderConfig cfg;
    cfg.algo = CcAlgo::Cubic;
    Pipe pipe(cfg, 4 * kMillisecond, 50e6);
    pipe.sender().app_write(5000000);
    pipe.engine.run_until(5 * kSecond);
    for (const auto& e : pipe.sender().log()) {
        if (e.event == TpEvent::Send) {
            CHECK(static_cast<double>(e.bytes_in_flight) <= e.cwnd + 1.0);
        }
    }
}

TEST_CASE("ce echo: dctcp reduces smoothly, counters propagate") {
    SenderConfig cfg;
    cfg.algo = CcAlgo::DctcpEcn;
    cfg.ecn = true;
    Pipe pipe(cfg, 4 * kMillisecond, 20e6);
    pipe.mangle = [](Packet& p) {
        if (p.ecn == Ecn::Ect0) p.ecn = Ecn::Ce;  // mark everything
    };
    pipe.sender().app_write(2000000);
    pipe.engine.run_until(10 * kSecond);

    CHECK(pipe.receiver().ce_count() > 0);
    bool saw_ce_echo = false;
    for (const auto& e : pipe.sender().log())
        if (e.event == TpEvent::CeEcho) saw_ce_echo = true;
    CHECK(saw_ce_echo);
    CHECK(pipe.sender().cc().cwnd < 20 * cfg.mss);  // persistent marks pin the window
    CHECK(pipe.receiver().cum_bytes() == 2000000);
}

TEST_CASE("classic ecn: reno cuts once per round trip on CE") {
    SenderConfig cfg;
    cfg.algo = CcAlgo::Reno;
    cfg.ecn = true;
    Pipe pipe(cfg, 4 * kMillisecond);
    int marks = 0;
    pipe.mangle = [&](Packet& p) {
        if (p.ecn == Ecn::Ect0 && marks < 2) {
            p.ecn = Ecn::Ce;  // two quick marks: at most one reduction
            ++marks;
        }
    };
    pipe.sender().app_write(120000);
    pipe.engine.run_until(kSecond);
    int reductions = 0;
    double prev_cwnd = 12000;
    for (const auto& e : pipe.sender().log()) {
        if (e.event == TpEvent::Ack) {
            if (e.cwnd < prev_cwnd) ++reductions;
            prev_cwnd = e.cwnd;
        }
    }
    CHECK(reductions == 1);
    CHECK(pipe.receiver().cum_bytes() == 120000);
}

TEST_CASE("ack beyond everything sent is rejected as a protocol error") {
    SenderConfig cfg;
    Pipe pipe(cfg);
    pipe.sender().app_write(1200);
    pipe.engine.run_until(kSecond);
    AckRecord bogus;
    bogus.cumulative_ack = 99999;
    bogus.recv_pkt_count = 100;
    CHECK_THROWS(pipe.sender().on_ack(bogus));
}

TEST_CASE("bbr: estimators converge on a constant-rate pipe") {
    SenderConfig cfg;
    cfg.algo = CcAlgo::BbrLite;
    Pipe pipe(cfg, 4 * kMillisecond, 100e6);
    pipe.sender().app_write(1ULL << 40);
    pipe.engine.run_until(12 * kSecond);

    auto* bbr = dynamic_cast<BbrLiteCc*>(&pipe.sender().algorithm());
    REQUIRE(bbr != nullptr);
    CHECK(bbr->btl_bw_bps() == doctest::Approx(100e6).epsilon(0.10));
    CHECK(to_ms(bbr->rt_prop()) == doctest::Approx(8.1).epsilon(0.05));

    std::vector<std::string> phases;
    for (const auto& e : pipe.sender().log())
        if (e.event == TpEvent::PhaseChange && e.detail) phases.emplace_back(e.detail);
    CHECK(std::find(phases.begin(), phases.end(), "bbr_drain") != phases.end());
    CHECK(std::find(phases.begin(), phases.end(), "bbr_probe_bw") != phases.end());
    CHECK(std::find(phases.begin(), phases.end(), "bbr_probe_rtt") != phases.end());
}

TEST_CASE("rto floor: expiry honors rto_min when srtt is small") {
    SenderConfig cfg;
    cfg.algo = CcAlgo::Reno;
    cfg.rto_min = 20 * kMillisecond;
    cfg.rto_only = true;
    Pipe pipe(cfg, 4 * kMillisecond);
    pipe.sender().app_write(120000);  // warm up the estimators
    pipe.engine.run_until(2 * kSecond);
    bool dropped = false;
    SimTime sent_at = 0;
    pipe.drop_filter = [&](const Packet& p) {
        if (!dropped && !p.retransmit) {
            dropped = true;
            sent_at = pipe.engine.now();
            return true;
        }
        return false;
    };
    pipe.sender().app_write(1200);
    pipe.engine.run_until(4 * kSecond);
    SimTime rto_at = 0;
    for (const auto& e : pipe.sender().log())
        if (e.event == TpEvent::Rto) rto_at = e.t;
    REQUIRE(rto_at > 0);
    CHECK(rto_at - sent_at >= 20 * kMillisecond);
    CHECK(rto_at - sent_at <= 40 * kMillisecond);
}
