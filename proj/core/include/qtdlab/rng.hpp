#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace qtdlab {

/// Finalizer of the splitmix64 generator, used both as the stream's output
/// function and as the hash for deterministic seed derivation.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Folds an arbitrary tuple of 64-bit tags into one seed. Deterministic and
/// order-sensitive, so (seed, lr_index, run_index) and (seed, run_index,
/// lr_index) give unrelated streams.
constexpr std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = 0x9E3779B97F4A7C15ull;
    for (std::uint64_t p : parts) {
        h = splitmix64_mix(h + 0x9E3779B97F4A7C15ull + splitmix64_mix(p));
    }
    return h;
}

/// Deterministic 64-bit random stream (splitmix64). Single-owner: one stream
/// per run, never shared across threads.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        return splitmix64_mix(state_);
    }

    /// Uniform double strictly inside (0, 1); never returns an endpoint, so
    /// log() and inverse-CDF transforms are always finite.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal draw, Box-Muller form; consumes two uniforms.
    double normal() {
        constexpr double two_pi = 6.283185307179586476925286766559;
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

    /// Unbiased integer in [0, n) via rejection sampling.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t threshold = (~n + 1) % n;  // 2^64 mod n
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

  private:
    std::uint64_t state_;
};

/// Stream derived from a base seed and purpose tags; used to split e.g.
/// transition-structure draws from reward-mean draws so they stay matched
/// across configurations.
inline RngStream substream(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
    std::uint64_t h = seed;
    for (std::uint64_t t : tags) h = mix_seed({h, t});
    return RngStream(h);
}

}  // namespace qtdlab
