#pragma once

#include <cstdint>

namespace respars {

// splitmix64. Tiny, fast, and identical on every platform, which is what we
// need for reproducible sampling; std:: distributions are unspecified across
// standard libraries, so everything random in this project goes through this
// generator.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53 random bits.
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    // Uniform in [0, bound), bound > 0. Lemire multiply-shift with
    // rejection, so it is unbiased.
    std::uint64_t next_below(std::uint64_t bound) {
        unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < bound) {
            const std::uint64_t cutoff = (0 - bound) % bound;
            while (lo < cutoff) {
                m = static_cast<unsigned __int128>(next()) * bound;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    bool next_sign_bit() { return (next() >> 63) != 0; }

private:
    std::uint64_t state_;
};

// Independent stream keyed by (seed, stream). Pre-splitting one stream per
// work item (oracle row, trial, pipeline stage) makes parallel and serial
// execution produce identical numbers.
inline SplitMix64 split_stream(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 mixer(seed ^ (stream + 1) * 0x632be59bd9b4e019ULL);
    return SplitMix64(mixer.next());
}

} // namespace respars
