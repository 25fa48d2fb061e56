#include "slr/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace slr {

namespace {

// SplitMix64 finalizer (Steele, Lea, Flood 2014). Also used to mix stream
// identifiers into derived seeds.
std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

}  // namespace

std::uint64_t SplitMix64::next() {
    state_ += kGolden;
    return mix(state_);
}

double SplitMix64::uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double SplitMix64::gaussian() {
    if (hasSpare_) {
        hasSpare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * scale;
    hasSpare_ = true;
    return u * scale;
}

std::uint64_t SplitMix64::below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("SplitMix64::below: bound must be positive");
    // Lemire's multiply-shift; the modulo bias is < 2^-64 * bound, far below
    // anything observable at the sample sizes used here.
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * bound) >> 64);
}

std::uint64_t deriveSeed(std::uint64_t seed, RngStream stream, std::uint64_t index) {
    std::uint64_t z = mix(seed + kGolden);
    z = mix(z ^ (static_cast<std::uint64_t>(stream) * 0xBF58476D1CE4E5B9ull + kGolden));
    z = mix(z ^ (index * 0x94D049BB133111EBull + kGolden));
    return z;
}

SplitMix64 streamRng(std::uint64_t seed, RngStream stream, std::uint64_t index) {
    return SplitMix64(deriveSeed(seed, stream, index));
}

}  // namespace slr
