#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace crossim {

struct TruncGaussParams {
    double mean = 0.0;
    double std = 0.0;
    double min = 0.0;
    double max = 0.0;
};

// One independently seeded draw sequence per stochastic component (traffic
// sizes, traffic jitter, RED coins, L4S coins, MAC loss, ...). Streams are
// derived from (seed, label) so enabling one mechanism never shifts the
// draws of another.
class RandomStream {
  public:
    RandomStream(std::uint64_t seed, std::string_view label);

    std::uint64_t next_u64();
    double uniform01();  // [0, 1)
    bool bernoulli(double p);
    double gaussian(double mean, double std);
    double truncated_gaussian(const TruncGaussParams& p);

    const std::string& label() const { return label_; }

  private:
    std::string label_;
    std::mt19937_64 engine_;
};

std::uint64_t mix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view s);

// Seed for run index `i` of a sweep derived from the sweep's base seed.
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index);

}  // namespace crossim
