#pragma once

#include <cstdint>
#include <random>

namespace specreg {

/// Reproducible random stream addressed by (seed, stream id). Streams with
/// different ids are statistically independent, and a stream's output never
/// depends on which thread draws from it or in which order streams are made.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Standard normal via Box-Muller (second variate cached).
    double normal();
    std::uint64_t next_u64() { return engine_(); }

private:
    std::mt19937_64 engine_;
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

/// Packs a small tuple of indices into a stream id. Each component is mixed
/// so nearby tuples do not collide.
std::uint64_t stream_id(std::uint64_t purpose, std::uint64_t a = 0, std::uint64_t b = 0);

}  // namespace specreg
