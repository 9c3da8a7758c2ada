#include <doctest.h>

#include "queue_harness.hpp"
#include "runner.hpp"

using namespace crossim;

namespace {

json tiny_bulk_scenario(double capacity_bps = 10e6, double horizon_s = 2.0) {
    // Buffer sized a few BDPs for the small test link, not the 500 Mb/s default.
    return json{{"name", "tiny-bulk"},
                {"horizon_s", horizon_s},
                {"seed", 3},
                {"channel",
                 {{"synth",
                   {{"los_capacity_bps", capacity_bps},
                    {"nlos_capacity_bps", capacity_bps},
                    {"los_duration_s", 1.0},
                    {"nlos_duration_s", 1.0}}}}},
                {"buffer", {{"capacity_bytes", 50000}}},
                {"flow_count", 1},
                {"flow_defaults", {{"app", "bulk"}, {"cc", "reno"}}}};
}

}  // namespace

TEST_CASE("bulk flow saturates a constant link without exceeding it") {
    Scenario sc = Scenario::from_json(tiny_bulk_scenario(10e6, 3.0));
    RunResult r = run_scenario(sc);
    REQUIRE(r.flows.size() == 1);
    const auto& f = r.flows[0];
    CHECK(f.goodput_bps > 0.7 * 10e6);
    CHECK(f.goodput_bps <= 10e6 * 1.001);  // never above the capacity integral
    CHECK(f.srtt_us.count > 100);
    CHECK(f.srtt_us.mean >= 8000.0);  // at least thetwo-way propagation
    std::string msg;
    CHECK_MESSAGE(queue_harness::conservation_holds(f.queue_log, &msg), msg);
}

TEST_CASE("same scenario and seed render byte-identical outputs") {
    Scenario sc = Scenario::from_json(tiny_bulk_scenario(20e6, 2.0));
    RunResult a = run_scenario(sc);
    RunResult b = run_scenario(sc);
    auto fa = a.render_files();
    auto fb = b.render_files();
    REQUIRE(fa.size() == fb.size());
    for (const auto& [name, contents] : fa) {
        REQUIRE(fb.count(name) == 1);
        CHECK_MESSAGE(contents == fb[name], name);
    }
}

TEST_CASE("vbr flows push frames through the stack") {
    json j = tiny_bulk_scenario(50e6, 2.0);
    j["flow_defaults"] = {{"app", "vbr"}, {"cc", "cubic"},
                          {"vbr", {{"datarate_bps", 10e6}, {"fps", 60.0}}}};
    Scenario sc = Scenario::from_json(j);
    RunResult r = run_scenario(sc);
    const auto& f = r.flows[0];
    // App-limited flow: goodput close to the source rate.
    CHECK(f.goodput_bps > 0.8 * 10e6);
    CHECK(f.goodput_bps < 1.2 * 10e6);
    CHECK(f.queue_counters.dropped_overflow == 0);
}

TEST_CASE("has flow produces a session with ladder-consistent quality") {
    json j = tiny_bulk_scenario(100e6, 20.0);
    j["name"] = "tiny-has";
    j["flow_defaults"] = {{"app", "has"}, {"cc", "cubic"}};
    Scenario sc = Scenario::from_json(j);
    RunResult r = run_scenario(sc);
    const auto& f = r.flows[0];
    REQUIRE(f.has_session);
    REQUIRE(f.qoe.segments > 3);
    CHECK(f.qoe.mean_vmaf >= 31.0);
    CHECK(f.qoe.mean_vmaf <= 97.0);
    CHECK(f.qoe.startup_delay_s > 0.0);
    CHECK(f.downloaded_s == doctest::Approx(f.played_s + f.buffer_end_s).epsilon(1e-6));
}

TEST_CASE("results json carries the documented schema") {
    Scenario sc = Scenario::from_json(tiny_bulk_scenario(10e6, 1.0));
    RunResult r = run_scenario(sc);
    json out = r.to_results_json();
    CHECK(out.contains("run"));
    CHECK(out["run"].contains("config_hash"));
    CHECK(out["run"].contains("seed"));
    CHECK(out.contains("flows"));
    const auto& f0 = out["flows"][0];
    for (const char* key : {"id", "throughput_bps", "goodput_bps", "srtt_us", "jitter_us",
                            "qdelay_us", "drops", "marks"}) {
        CHECK_MESSAGE(f0.contains(key), key);
    }
    CHECK(f0["srtt_us"].contains("mean"));
    CHECK(f0["srtt_us"].contains("p50"));
    CHECK(f0["srtt_us"].contains("p95"));
    CHECK(f0["srtt_us"].contains("p99"));
    CHECK(f0["drops"].contains("aqm"));
    CHECK(f0["drops"].contains("overflow"));
    CHECK(out.contains("sessions"));
    CHECK(out.contains("aggregate"));
}

TEST_CASE("renders one transport and one queue csv per flow") {
    json j = tiny_bulk_scenario(10e6, 1.0);
    j["flow_count"] = 2;
    Scenario sc = Scenario::from_json(j);
    RunResult r = run_scenario(sc);
    auto files = r.render_files();
    CHECK(files.count("results.json") == 1);
    CHECK(files.count("flow_0_transport.csv") == 1);
    CHECK(files.count("flow_1_transport.csv") == 1);
    CHECK(files.count("flow_0_queue.csv") == 1);
    CHECK(files.count("flow_1_queue.csv") == 1);
    CHECK(files["flow_0_transport.csv"].rfind("t_us,event,seq,cwnd_bytes", 0) == 0);
}

TEST_CASE("mac loss widens the srtt and jitter tails at equal capacity") {
    // Uncongested VBR flow: queueing stays negligible, so the comparison
    // isolates the retransmission delay added by the lossy media access.
    json clean = tiny_bulk_scenario(50e6, 5.0);
    clean["flow_defaults"] = {{"app", "vbr"},
                              {"cc", "cubic"},
                              {"vbr", {{"datarate_bps", 8e6}, {"fps", 60.0}}}};
    json lossy = clean;
    lossy["channel"]["synth"]["los_loss_prob"] = 0.25;
    lossy["channel"]["synth"]["nlos_loss_prob"] = 0.25;
    RunResult rc = run_scenario(Scenario::from_json(clean));
    RunResult rl = run_scenario(Scenario::from_json(lossy));
    CHECK(rl.flows[0].srtt_us.p99 > rc.flows[0].srtt_us.p99);
    // Transit-time jitter picks up the per-retry delays directly.
    CHECK(rl.flows[0].jitter.rfc3550_us > rc.flows[0].jitter.rfc3550_us);
    CHECK(rl.flows[0].mac_losses > 0);
    CHECK(rc.flows[0].mac_losses == 0);
}

TEST_CASE("capacity outage stalls the link without losing packets") {
    json j = tiny_bulk_scenario(10e6, 2.0);
    j["channel"]["synth"] = {{"los_capacity_bps", 10e6},
                             {"nlos_capacity_bps", 0.0},
                             {"los_duration_s", 0.5},
                             {"nlos_duration_s", 0.5}};
    // rto_only avoids spurious fast retransmits while the link is dark
    Scenario sc = Scenario::from_json(j);
    RunResult r = run_scenario(sc);
    const auto& f = r.flows[0];
    CHECK(f.goodput_bps > 0.0);
    CHECK(f.goodput_bps <= 0.55 * 10e6);  // half the time the link is dark
    std::string msg;
    CHECK_MESSAGE(queue_harness::conservation_holds(f.queue_log, &msg), msg);
}
