// Independent closed-form evaluators for the published formulas, kept apart
// from the production code they check.
#pragma once

#include <cmath>

namespace oracles {

// Probabilistic early-detection act probability.
inline double red_probability(double avg, long long count, double min_th, double max_th,
                              double p_max) {
    if (avg < min_th) return 0.0;
    if (avg >= max_th) return 1.0;
    double p_b = p_max * (avg - min_th) / (max_th - min_th);
    double denom = 1.0 - static_cast<double>(count) * p_b;
    if (denom <= 0.0) return 1.0;
    double p_a = p_b / denom;
    return p_a > 1.0 ? 1.0 : p_a;
}

// EWMA after N steps against a constant input.
inline double ewma_closed_form(double avg0, double len, double w_q, int n) {
    double decay = std::pow(1.0 - w_q, n);
    return decay * avg0 + len * (1.0 - decay);
}

// Cubic growth curve, symbolic form, byte units.
inline double cubic_closed_form(double t_s, double w_max_bytes, double mss_bytes) {
    const double c = 0.4;
    const double beta_complement = 0.3;
    double w_max_seg = w_max_bytes / mss_bytes;
    double k = std::cbrt(w_max_seg * beta_complement / c);
    double w = c * std::pow(t_s - k, 3.0) + w_max_seg;
    double bytes = w * mss_bytes;
    return bytes < mss_bytes ? mss_bytes : bytes;
}

inline double cubic_inflection_s(double w_max_bytes, double mss_bytes) {
    return std::cbrt((w_max_bytes / mss_bytes) * 0.3 / 0.4);
}

// Delay-threshold marking ramp.
inline double l4s_ramp(double qdelay_ms, double low_ms, double high_ms) {
    return (qdelay_ms - low_ms) / (high_ms - low_ms);
}

}  // namespace oracles
