#include "icclink/rng.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace icc {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
    // Mix seed and stream through splitmix64 so that nearby ids still give
    // well-separated engine states.
    std::uint64_t state = seed;
    std::uint64_t a = splitmix64(state);
    state ^= stream * 0xD1342543DE82EF95ULL;
    std::array<std::uint32_t, 8> words{};
    for (std::size_t i = 0; i < words.size(); i += 2) {
        const std::uint64_t w = splitmix64(state) ^ a;
        words[i] = static_cast<std::uint32_t>(w);
        words[i + 1] = static_cast<std::uint32_t>(w >> 32);
        a = splitmix64(state);
    }
    std::seed_seq seq(words.begin(), words.end());
    return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(make_engine(seed, stream)) {}

double RngStream::gaussian(double mean, double stddev) {
    return mean + stddev * normal_(engine_);
}

int RngStream::bit() {
    return static_cast<int>(engine_() >> 63);
}

std::uint64_t RngStream::word() {
    return engine_();
}

CVector sample_complex_gaussian(RngStream& rng, std::size_t n, Complex mean, double variance) {
    if (variance < 0.0) throw std::invalid_argument("sample_complex_gaussian: negative variance");
    CVector out(n, mean);
    if (variance == 0.0) return out;
    const double component_std = std::sqrt(variance / 2.0);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = Complex(rng.gaussian(mean.real(), component_std),
                         rng.gaussian(mean.imag(), component_std));
    }
    return out;
}

RVector sample_real_gaussian(RngStream& rng, std::size_t n, double mean, double variance) {
    if (variance < 0.0) throw std::invalid_argument("sample_real_gaussian: negative variance");
    RVector out(n, mean);
    if (variance == 0.0) return out;
    const double stddev = std::sqrt(variance);
    for (std::size_t i = 0; i < n; ++i) out[i] = rng.gaussian(mean, stddev);
    return out;
}

std::vector<std::uint8_t> sample_bits(RngStream& rng, std::size_t n) {
    std::vector<std::uint8_t> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<std::uint8_t>(rng.bit());
    return out;
}

}  // namespace icc
