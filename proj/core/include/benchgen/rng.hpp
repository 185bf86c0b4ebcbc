#ifndef BENCHGEN_RNG_HPP
#define BENCHGEN_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace benchgen {

/// Deterministic random stream with cheap derivation of independent
/// sub-streams. Every run is reproducible from a single master seed:
/// concurrent workers never share a stream, they derive their own from
/// (seed, salt...) so results are independent of scheduling.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : stream_id_(seed), engine_(mix(seed)) {}

    /// Child stream keyed by the parent's identity and a salt. Derivation
    /// depends only on the stream id, not on how many numbers were drawn.
    Rng derive(std::uint64_t salt) const { return Rng(mix(stream_id_ ^ mix(salt))); }

    Rng derive(std::uint64_t a, std::uint64_t b) const { return derive(a).derive(b); }

    std::uint64_t stream_id() const { return stream_id_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform index in [0, n). Rejection sampling, no modulo bias.
    std::size_t uniform_index(std::size_t n) {
        std::uint64_t mask = n - 1;
        mask |= mask >> 1;
        mask |= mask >> 2;
        mask |= mask >> 4;
        mask |= mask >> 8;
        mask |= mask >> 16;
        mask |= mask >> 32;
        for (;;) {
            std::uint64_t v = next_u64() & mask;
            if (v < n) return static_cast<std::size_t>(v);
        }
    }

    /// Uniform integer in [lo, hi], inclusive.
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(uniform_index(static_cast<std::size_t>(hi - lo) + 1));
    }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Standard normal via Box-Muller (no state cached between calls).
    double normal() {
        double u1 = 1.0 - uniform01();  // (0, 1]
        double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    double cauchy(double location, double scale) {
        return location + scale * std::tan(std::numbers::pi * (uniform01() - 0.5));
    }

private:
    // splitmix64 finalizer; decorrelates consecutive seeds.
    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
};

}  // namespace benchgen

#endif
