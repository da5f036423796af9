#pragma once

#include <cmath>
#include <cstdint>

namespace sketchvar::rng {

// Counter-based generator. Every variate is a pure function of
// (seed, stream, counter), so draws are addressable: regenerating any
// sub-block of a random matrix gives bit-identical values regardless of
// generation order or thread count. Streams partition the address space;
// matrix rows use stream ids [0, 2^63), stateful consumers use ids with
// the top bit set (see stream_tag).

inline std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

inline std::uint64_t raw(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    std::uint64_t h = mix64(seed + 0x9e3779b97f4a7c15ULL);
    h = mix64(h ^ (stream * 0xc2b2ae3d27d4eb4fULL));
    h = mix64(h ^ (counter * 0x165667b19e3779f9ULL));
    return h;
}

/// Uniform double in (0, 1]; never returns 0 so it is safe under log().
inline double uniform_pos(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return static_cast<double>((raw(seed, stream, counter) >> 11) + 1) * 0x1.0p-53;
}

/// Uniform double in [0, 1).
inline double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return static_cast<double>(raw(seed, stream, counter) >> 11) * 0x1.0p-53;
}

/// Standard normal via Box-Muller; one variate per counter slot.
inline double normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    const double u1 = uniform_pos(seed, stream, 2 * counter);
    const double u2 = uniform(seed, stream, 2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

/// Sign flip with probability 1/2.
inline double rademacher(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return (raw(seed, stream, counter) >> 63) ? 1.0 : -1.0;
}

/// Marks a stream id as belonging to a stateful consumer rather than a
/// sketch row, keeping the two address spaces disjoint.
constexpr std::uint64_t stream_tag(std::uint64_t id) { return id | (1ULL << 63); }

/// Sequential convenience wrapper over the counter function for code that
/// wants an ordinary generator (data synthesis, sampling, shuffles).
class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t stream_id)
        : seed_(seed), stream_(stream_tag(stream_id)) {}

    double uniform() { return rng::uniform(seed_, stream_, counter_++); }
    double uniform_pos() { return rng::uniform_pos(seed_, stream_, counter_++); }
    double normal() {
        const double u1 = rng::uniform_pos(seed_, stream_, counter_++);
        const double u2 = rng::uniform(seed_, stream_, counter_++);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }
    /// Uniform integer in [0, bound) by rejection-free scaling (bound << 2^53).
    std::uint64_t below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(uniform() * static_cast<double>(bound)) % bound;
    }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
};

}  // namespace sketchvar::rng
