#pragma once

// Counter-based random streams: each (seed, stream_id) pair yields an
// independent, reproducible sequence, so Monte-Carlo trials can be generated
// in any order with identical results.

#include <cmath>
#include <cstdint>

namespace selfsim {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

class GaussianStream {
public:
    GaussianStream(std::uint64_t seed, std::uint64_t stream_id) {
        // Decorrelate the stream id from the seed before mixing.
        state_ = seed;
        (void)splitmix64_next(state_);
        state_ ^= 0xD1B54A32D192ED03ull * (stream_id + 1);
        (void)splitmix64_next(state_);
    }

    /// Uniform in (0, 1).
    double uniform() {
        return (static_cast<double>(splitmix64_next(state_) >> 11) + 0.5) *
               0x1.0p-53;
    }

    /// Standard normal via the Marsaglia polar method (no trig, portable).
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        have_spare_ = true;
        return u * m;
    }

private:
    std::uint64_t state_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace selfsim
