#pragma once

#include <cstdint>

namespace slr {

// All randomized pieces of the library draw from SplitMix64 streams. The
// generator is a pure function of its 64-bit state, so a (seed, stream,
// index) triple fully determines every draw: results are reproducible
// bit-for-bit and independent of evaluation order, which is what lets
// experiment cells run in any order (or in parallel) without changing output.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next();

    /// Uniform double in [0, 1), 53 random bits.
    double uniform();

    /// Standard normal via the Marsaglia polar method. Consumes a variable
    /// number of uniforms but is deterministic for a given stream.
    double gaussian();

    /// Uniform integer in [0, bound); bound must be positive.
    std::uint64_t below(std::uint64_t bound);

private:
    std::uint64_t state_;
    bool hasSpare_ = false;
    double spare_ = 0.0;
};

/// Named purposes keep independent draws on independent streams. A stream is
/// identified by (seed, stream, index); `index` distinguishes repetitions of
/// the same purpose (trial number, cell id, sample id).
enum class RngStream : std::uint64_t {
    SparseSupport = 1,
    SparseValues = 2,
    LowrankX = 3,
    LowrankY = 4,
    XiSamples = 5,
    PowerIterationStart = 6,
    PhaseCell = 7,
    PhaseTrial = 8,
    LemmaTrial = 9,
    RigiditySparse = 10,
    RigidityLowrank = 11,
    TestData = 12,
};

std::uint64_t deriveSeed(std::uint64_t seed, RngStream stream, std::uint64_t index = 0);

SplitMix64 streamRng(std::uint64_t seed, RngStream stream, std::uint64_t index = 0);

}  // namespace slr
