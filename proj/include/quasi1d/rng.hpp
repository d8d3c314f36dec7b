#pragma once
// Deterministic splittable random streams. Each stream is keyed by up to
// four 64-bit identifiers (seed, purpose, replica, cycle) hashed into an
// initial state; outputs follow the splitmix64 sequence from that state, so
// a stream is a pure function of its key. Distinct keys give statistically
// independent streams, which makes replica/cycle simulation embarrassingly
// parallel with results independent of execution order.

#include <cmath>
#include <cstdint>

namespace quasi1d {

// splitmix64 finalizer (public-domain constants).
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class RngStream {
  public:
    explicit RngStream(std::uint64_t seed, std::uint64_t a = 0, std::uint64_t b = 0,
                       std::uint64_t c = 0) {
        state_ = mix64(seed);
        state_ = mix64(state_ ^ mix64(a ^ 0x243f6a8885a308d3ULL));
        state_ = mix64(state_ ^ mix64(b ^ 0x13198a2e03707344ULL));
        state_ = mix64(state_ ^ mix64(c ^ 0xa4093822299f31d0ULL));
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random bits.
    double u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Exponential with the given rate; u01 < 1 keeps this finite.
    double exponential(double rate) { return -std::log1p(-u01()) / rate; }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // Widening-multiply rejection-free mapping (negligible bias for
        // desk-scale n).
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

  private:
    std::uint64_t state_;
};

// Stream purposes, so different uses of one user seed never collide.
enum : std::uint64_t {
    kStreamCycles = 1,      // per-cycle excursion simulation
    kStreamBootstrap = 2,   // bootstrap resampling
    kStreamTimeChange = 3,  // time-changed cumulative process replicas
    kStreamBatchMeans = 4,  // single long-trajectory batch-means estimator
};

}  // namespace quasi1d
