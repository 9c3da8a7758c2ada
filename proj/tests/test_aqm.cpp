#include <doctest.h>

#include <cmath>

#include "aqm.hpp"
#include "oracles.hpp"
#include "random.hpp"

using namespace crossim;

TEST_CASE("ewma: full weight on the current length") {
    CHECK(update_avg(500.0, 100.0, 1.0) == 100.0);
}

TEST_CASE("ewma: small weight arithmetic") {
    CHECK(update_avg(0.0, 100.0, 0.002) == doctest::Approx(0.2));
}

TEST_CASE("ewma: fixed point at the current length") {
    CHECK(update_avg(250.0, 250.0, 0.37) == doctest::Approx(250.0));
}

TEST_CASE("ewma: repeated application matches the closed form") {
    for (int n : {1, 10, 100, 1000}) {
        double avg = 3000.0;
        for (int i = 0; i < n; ++i) avg = update_avg(avg, 100.0, 0.002);
        double expect = oracles::ewma_closed_form(3000.0, 100.0, 0.002, n);
        CHECK(std::abs(avg - expect) <= 1e-9 * std::abs(expect));
    }
}

TEST_CASE("red probability: boundaries and saturation") {
    RedConfig cfg{1000.0, 2000.0, 0.1, 0.002};
    CHECK(red_act_probability(999.0, 0, cfg) == 0.0);
    CHECK(red_act_probability(1000.0, 0, cfg) == 0.0);  // p_b = 0 at min_th
    CHECK(red_act_probability(1500.0, 0, cfg) == doctest::Approx(0.05));  // p_max/2
    CHECK(red_act_probability(2000.0, 0, cfg) == 1.0);
    CHECK(red_act_probability(3000.0, 5, cfg) == 1.0);
    // count * p_b >= 1 forces an act
    CHECK(red_act_probability(1999.0, 1000000, cfg) == 1.0);
}

TEST_CASE("red probability matches the independent evaluator on a dense grid") {
    RedConfig cfg{800000.0, 1000000.0, 0.1, 0.002};
    int points = 0;
    for (double avg = 700000.0; avg <= 1100000.0; avg += 2003.0) {
        for (long long count : {0LL, 1LL, 3LL, 10LL, 50LL, 500LL}) {
            double got = red_act_probability(avg, count, cfg);
            double want = oracles::red_probability(avg, count, cfg.min_th, cfg.max_th, cfg.p_max);
            CHECK(got == want);  // tolerance zero: same arithmetic
            ++points;
        }
    }
    CHECK(points >= 1000);
}

TEST_CASE("red act probability is non-decreasing in avg at count 0") {
    RedConfig cfg{1000.0, 9000.0, 0.25, 0.002};
    double prev = -1.0;
    for (double avg = 0.0; avg <= 10000.0; avg += 10.0) {
        double p = red_act_probability(avg, 0, cfg);
        CHECK(p >= prev);
        prev = p;
    }
}

TEST_CASE("red decision: accepts below min_th, always acts at max_th, counts in between") {
    RedConfig cfg{1000.0, 2000.0, 1.0, 0.002};
    RandomStream coin(3, "red_coin");
    RedState st;

    st.avg = 500.0;
    CHECK(red_decision(st, cfg, coin) == RedDecision::Accept);
    CHECK(st.count == 0);  // below min_th the counter is untouched

    st.avg = 2500.0;
    st.count = 7;
    CHECK(red_decision(st, cfg, coin) == RedDecision::Act);
    CHECK(st.count == 0);  // reset on every act

    // In the region with p_max = 1 and avg at midpoint, acts happen quickly;
    // count increments on each accept until then.
    st.avg = 1500.0;
    st.count = 0;
    int accepts = 0;
    while (red_decision(st, cfg, coin) == RedDecision::Accept) {
        ++accepts;
        CHECK(st.count == accepts);
        REQUIRE(accepts < 100);
    }
    CHECK(st.count == 0);
}

TEST_CASE("ared adaptation: dead zone, additive increase, multiplicative decrease") {
    AredConfig cfg;
    cfg.red = RedConfig{900.0, 1000.0, 0.1, 0.002};
    cfg.target_low = 940.0;
    cfg.target_high = 960.0;
    cfg.alpha_inc = 0.01;
    cfg.beta_dec = 0.9;

    AredState st{0.1};
    ared_adapt(st, cfg, 950.0);  // inside the band
    CHECK(st.max_p == 0.1);

    for (int i = 0; i < 10; ++i) ared_adapt(st, cfg, 980.0);
    CHECK(st.max_p == doctest::Approx(0.2));

    for (int i = 0; i < 200; ++i) ared_adapt(st, cfg, 900.0);
    CHECK(st.max_p == doctest::Approx(0.01));  // floor

    st.max_p = 0.49;
    for (int i = 0; i < 10; ++i) ared_adapt(st, cfg, 980.0);
    CHECK(st.max_p == doctest::Approx(0.5));  // cap
}

TEST_CASE("ared default increment follows min(0.01, max_p/4)") {
    AredConfig cfg;
    cfg.red = RedConfig{900.0, 1000.0, 0.1, 0.002};
    cfg.target_low = 940.0;
    cfg.target_high = 960.0;  // alpha_inc unset
    AredState st{0.02};
    ared_adapt(st, cfg, 980.0);
    CHECK(st.max_p == doctest::Approx(0.02 + 0.005));  // max_p/4 = 0.005 < 0.01
}

TEST_CASE("codel control law spaces actions by interval over sqrt(count)") {
    SimTime interval = 100 * kMillisecond;
    CHECK(codel_control_law(0, interval, 1) == interval);
    CHECK(codel_control_law(0, interval, 4) == interval / 2);
    SimTime expect2 = static_cast<SimTime>(static_cast<double>(interval) / std::sqrt(2.0));
    CHECK(codel_control_law(1000, interval, 2) == 1000 + expect2);
}

TEST_CASE("l4s ramp position matches the closed form on a grid") {
    L4sConfig cfg;
    cfg.low_th = 10 * kMillisecond;
    cfg.high_th = 25 * kMillisecond;
    for (double q_ms = 10.0; q_ms <= 25.0; q_ms += 0.01) {
        double got = l4s_temp(from_ms(q_ms), cfg);
        double want = oracles::l4s_ramp(to_ms(from_ms(q_ms)), 10.0, 25.0);
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("l4s probability: region rule") {
    L4sConfig cfg;
    cfg.low_th = 10 * kMillisecond;
    cfg.high_th = 25 * kMillisecond;
    cfg.alpha = 0.25;
    L4sState st;
    CHECK(l4s_probability(5 * kMillisecond, cfg, st, 0) == 0.0);
    CHECK(l4s_probability(10 * kMillisecond, cfg, st, 0) == 0.0);   // at low_th
    CHECK(l4s_probability(25 * kMillisecond, cfg, st, 0) == 1.0);   // at high_th
    CHECK(l4s_probability(80 * kMillisecond, cfg, st, 0) == 1.0);
}

TEST_CASE("l4s probability: memoryless case at alpha 1") {
    L4sConfig cfg;
    cfg.low_th = 10 * kMillisecond;
    cfg.high_th = 25 * kMillisecond;
    cfg.alpha = 1.0;
    L4sState st;
    SimTime qdelay = cfg.low_th + static_cast<SimTime>(0.4 * (cfg.high_th - cfg.low_th));
    CHECK(l4s_probability(qdelay, cfg, st, 0) == doctest::Approx(0.4));
}

TEST_CASE("l4s probability: EWMA updates at most once per dT") {
    L4sConfig cfg;
    cfg.low_th = 10 * kMillisecond;
    cfg.high_th = 20 * kMillisecond;
    cfg.alpha = 0.5;
    cfg.dt = kMillisecond;
    L4sState st;
    SimTime mid = 15 * kMillisecond;  // ramp = 0.5
    double p1 = l4s_probability(mid, cfg, st, 0);
    CHECK(p1 == doctest::Approx(0.25));  // 0.5*0.5 + 0.5*0
    // Within the same dT window the state must not move.
    double p2 = l4s_probability(18 * kMillisecond, cfg, st, kMicrosecond);
    CHECK(p2 == doctest::Approx(0.25));
    // After dT it does.
    double p3 = l4s_probability(mid, cfg, st, kMillisecond);
    CHECK(p3 == doctest::Approx(0.5 * 0.5 + 0.5 * 0.25));
}

TEST_CASE("l4s probability decays back toward zero through quiet periods") {
    L4sConfig cfg;
    cfg.low_th = 10 * kMillisecond;
    cfg.high_th = 20 * kMillisecond;
    cfg.alpha = 0.5;
    cfg.dt = kMillisecond;
    L4sState st;
    // Build the state up in the ramp region.
    l4s_probability(18 * kMillisecond, cfg, st, 0);
    l4s_probability(18 * kMillisecond, cfg, st, kMillisecond);
    double built = st.p_mark;
    CHECK(built > 0.5);
    // A stretch of low-delay dequeues bleeds it off instead of freezing it.
    for (int i = 2; i < 30; ++i) {
        CHECK(l4s_probability(kMillisecond, cfg, st, i * kMillisecond) == 0.0);
    }
    CHECK(st.p_mark < 0.01);
}

TEST_CASE("l4s probability converges toward the ramp and stays clamped") {
    L4sConfig cfg;
    cfg.low_th = 10 * kMillisecond;
    cfg.high_th = 20 * kMillisecond;
    cfg.alpha = 0.25;
    cfg.dt = kMillisecond;
    L4sState st;
    SimTime q = 18 * kMillisecond;  // ramp = 0.8
    double p = 0.0;
    for (int i = 0; i < 200; ++i) p = l4s_probability(q, cfg, st, i * kMillisecond);
    CHECK(p == doctest::Approx(0.8).epsilon(1e-6));
    CHECK(p <= 1.0);
    CHECK(p >= 0.0);
}
