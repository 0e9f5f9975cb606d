#pragma once

#include <cstdint>
#include <cmath>
#include <random>

namespace irtforge {

// Seeded generator used for every stochastic operation.
//
// Engine: std::mt19937_64 (its output sequence is fixed by the standard).
// Uniforms take the top 53 bits of one engine output; normals use the
// Marsaglia polar method; bounded integers use rejection sampling. The
// distribution transforms are written out here instead of using
// <random>'s distributions, whose outputs differ between standard library
// implementations, so a recorded seed replays identically everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform on [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    bool bernoulli(double p) { return uniform() < p; }

    // Uniform on {0, ..., n-1}; n must be positive.
    std::uint64_t index(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Independent sub-stream seed for `stream` derived from a master seed
// (splitmix64 finalizer).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace irtforge
