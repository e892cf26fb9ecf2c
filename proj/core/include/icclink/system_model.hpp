#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "icclink/linalg.hpp"
#include "icclink/rng.hpp"

namespace icc {

/// How the detector treats the (unknown) mean of the computing signals:
/// estimate it iteratively, or trust that it is zero.
enum class MeanMode { Adaptive, KnownZero };

/// Dimensions, powers and algorithm knobs for one scenario. The total
/// per-user transmit power is normalized to 1 and split between the data
/// constellation and the computing signal.
struct SystemConfig {
    std::size_t n_antennas = 10;     // receive antennas
    std::size_t n_users = 2;         // single-antenna transmitters
    double data_power = 0.99;        // QPSK constellation power
    double compute_variance = 0.01;  // variance of the computing signal
    double compute_mean = 0.0;       // mean of the computing signal
    double noise_variance = 0.1;     // complex noise variance per antenna
    double channel_variance = 1.0;   // variance of each fading coefficient
    double damping_data = 0.5;
    double damping_compute = 0.8;
    int iterations = 30;
    MeanMode mean_mode = MeanMode::Adaptive;

    /// Amplitude of each QPSK component, sqrt(data_power / 2).
    double qpsk_amplitude() const { return std::sqrt(data_power / 2.0); }

    /// Throws std::invalid_argument naming the violated constraint.
    void validate() const;
};

using ChannelMatrix = CMatrix;  // n_antennas x n_users fading coefficients

/// Ground truth transmitted in one channel use.
struct TransmitFrame {
    std::vector<std::uint8_t> bits;  // 2K data bits
    CVector data;                    // K QPSK symbols
    RVector compute;                 // K computing signals
    CVector x;                       // per-user superposition data + compute
};

/// i.i.d. Rayleigh-fading channel, one coefficient per (antenna, user).
ChannelMatrix generate_channel(const SystemConfig& cfg, RngStream& rng);

/// Gray-mapped QPSK: bit pair (b0, b1) -> amp * ((1-2*b0) + j(1-2*b1)).
/// Every symbol has |.|^2 == data_power exactly.
CVector qpsk_modulate(std::span<const std::uint8_t> bits, double data_power);

/// Hard decision by component signs; a zero component resolves to bit 0.
std::vector<std::uint8_t> qpsk_demodulate(std::span<const Complex> symbols);

TransmitFrame generate_frame(const SystemConfig& cfg, RngStream& rng);

/// y = H x + w with w ~ CN(0, noise_variance * I).
CVector transmit(const SystemConfig& cfg, const ChannelMatrix& channel, const TransmitFrame& frame,
                 RngStream& rng);

/// The over-the-air target: the arithmetic sum of the computing signals.
double sum_target(std::span<const double> compute);

}  // namespace icc
