#pragma once

#include <cstdint>

namespace crossim {

// Simulation time in integer nanoseconds since run start. Integer time keeps
// event ordering exact and runs reproducible.
using SimTime = std::int64_t;

constexpr SimTime kNanosecond = 1;
constexpr SimTime kMicrosecond = 1000;
constexpr SimTime kMillisecond = 1000 * kMicrosecond;
constexpr SimTime kSecond = 1000 * kMillisecond;

constexpr SimTime from_us(std::int64_t us) { return us * kMicrosecond; }
constexpr SimTime from_ms(double ms) { return static_cast<SimTime>(ms * static_cast<double>(kMillisecond)); }
constexpr SimTime from_s(double s) { return static_cast<SimTime>(s * static_cast<double>(kSecond)); }

constexpr double to_us(SimTime t) { return static_cast<double>(t) / static_cast<double>(kMicrosecond); }
constexpr double to_ms(SimTime t) { return static_cast<double>(t) / static_cast<double>(kMillisecond); }
constexpr double to_s(SimTime t) { return static_cast<double>(t) / static_cast<double>(kSecond); }

}  // namespace crossim
