#pragma once

#include <cstdint>
#include <random>

namespace modsim::core {

// splitmix64; used to derive independent substream seeds so that per-entity
// draws do not depend on generation order or thread count.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a) {
    return splitmix64(seed ^ splitmix64(a));
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return splitmix64(mix_seed(seed, a) ^ splitmix64(b + 0x517cc1b727220a95ULL));
}

// Engine wrapper so all modules draw from the same generator type.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    double uniform01() {
        return std::uniform_real_distribution<double>(0.0, 1.0)(eng_);
    }

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(eng_);
    }

    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        return std::uniform_int_distribution<std::int64_t>(lo, hi)(eng_);
    }

    double normal(double mean, double sigma) {
        return std::normal_distribution<double>(mean, sigma)(eng_);
    }

    double lognormal(double log_median, double log_sigma) {
        return std::exp(normal(log_median, log_sigma));
    }

    std::int64_t poisson(double mean) {
        return std::poisson_distribution<std::int64_t>(mean)(eng_);
    }

    std::mt19937_64& engine() { return eng_; }

  private:
    std::mt19937_64 eng_;
};

} // namespace modsim::core
