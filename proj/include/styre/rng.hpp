#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace styre {

// Counter-based deterministic generator: every (seed, stream) pair yields
// an independent reproducible sequence, so per-sample streams can be
// derived from one master seed regardless of execution order.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : state_(mix(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)))) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    // uniform in [0, 1)
    double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

    // sample an index from a weight vector by inverse CDF
    int sample(const std::vector<double>& weights) {
        double u = next_double(), acc = 0.0;
        for (size_t i = 0; i + 1 < weights.size(); ++i) {
            acc += weights[i];
            if (u < acc) return (int)i;
        }
        return (int)weights.size() - 1;
    }

    // standard normal via Box-Muller
    double next_gaussian() {
        double u1 = next_double(), u2 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

private:
    static std::uint64_t mix(std::uint64_t z) {  // splitmix64 finalizer
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t state_;
};

}  // namespace styre
