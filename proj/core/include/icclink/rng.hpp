#pragma once

#include <cstdint>
#include <random>

#include "icclink/linalg.hpp"

namespace icc {

/// Deterministic random stream addressed by (seed, stream). The same pair
/// always reproduces the same sample sequence, and distinct stream ids on
/// one seed give decorrelated sequences, so trials can be dispatched to
/// workers in any order without changing results.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

    /// One N(mean, stddev^2) draw.
    double gaussian(double mean, double stddev);

    /// One uniform bit.
    int bit();

    std::uint64_t word();

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream() const noexcept { return stream_; }

private:
    std::uint64_t seed_ = 0;
    std::uint64_t stream_ = 0;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// n i.i.d. CN(mean, variance) samples; real and imaginary parts each carry
/// variance/2. variance == 0 degenerates to a constant vector.
CVector sample_complex_gaussian(RngStream& rng, std::size_t n, Complex mean, double variance);

/// n i.i.d. N(mean, variance) samples.
RVector sample_real_gaussian(RngStream& rng, std::size_t n, double mean, double variance);

std::vector<std::uint8_t> sample_bits(RngStream& rng, std::size_t n);

}  // namespace icc
