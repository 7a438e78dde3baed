#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace subordinate {

/// Reproducible random stream identified by (master_seed, stream_index).
///
/// Each replicate of a Monte Carlo experiment gets its own stream_index, so
/// results do not depend on how replicates are scheduled across threads.
/// The engine seed is a splitmix64 mix of both identifiers.
class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
        : master_seed_(master_seed), stream_index_(stream_index), engine_(mix(master_seed, stream_index)) {}

    std::uint64_t master_seed() const { return master_seed_; }
    std::uint64_t stream_index() const { return stream_index_; }

    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }
    result_type operator()() { return engine_(); }

    /// Uniform on (0, 1], 53-bit resolution.
    double uniform_open0() {
        return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    }

    /// Inverse-CDF exponential; rate must be > 0.
    double exponential(double rate) { return -std::log(uniform_open0()) / rate; }

private:
    static std::uint64_t splitmix64(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t index) {
        return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
    }

    std::uint64_t master_seed_;
    std::uint64_t stream_index_;
    std::mt19937_64 engine_;
};

}  // namespace subordinate
