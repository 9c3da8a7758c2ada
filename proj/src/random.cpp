#include "random.hpp"

#include <cmath>
#include <stdexcept>

namespace crossim {

std::uint64_t mix64(std::uint64_t x) {
    // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) {
    return mix64(base_seed ^ mix64(index + 1));
}

RandomStream::RandomStream(std::uint64_t seed, std::string_view label)
    : label_(label), engine_(mix64(seed ^ fnv1a64(label))) {}

std::uint64_t RandomStream::next_u64() { return engine_(); }

double RandomStream::uniform01() {
    // 53-bit mantissa; identical draws on every platform for a given stream.
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

bool RandomStream::bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform01() < p;
}

double RandomStream::gaussian(double mean, double std) {
    // Box-Muller; u1 shifted into (0,1] so the log is finite.
    double u1 = 1.0 - uniform01();
    double u2 = uniform01();
    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    return mean + std * z;
}

double RandomStream::truncated_gaussian(const TruncGaussParams& p) {
    if (p.std < 0.0 || p.min > p.max)
        throw std::invalid_argument("truncated_gaussian: std < 0 or min > max");
    if (p.std == 0.0) return std::clamp(p.mean, p.min, p.max);
    double x = 0.0;
    for (int i = 0; i < 64; ++i) {
        x = gaussian(p.mean, p.std);
        if (x >= p.min && x <= p.max) return x;
    }
    return std::clamp(x, p.min, p.max);
}

}  // namespace crossim
