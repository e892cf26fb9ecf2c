#include "icclink/system_model.hpp"

#include <cmath>
#include <stdexcept>

namespace icc {

void SystemConfig::validate() const {
    if (n_antennas < 2)
        throw std::invalid_argument("SystemConfig: n_antennas must be at least 2");
    if (n_users < 1) throw std::invalid_argument("SystemConfig: n_users must be at least 1");
    if (data_power < 0.0 || compute_variance < 0.0)
        throw std::invalid_argument("SystemConfig: powers must be nonnegative");
    if (std::abs(data_power + compute_variance - 1.0) > 1e-12)
        throw std::invalid_argument(
            "SystemConfig: data_power + compute_variance must equal 1 (unit transmit power)");
    if (noise_variance < 0.0)
        throw std::invalid_argument("SystemConfig: noise_variance must be nonnegative");
    if (channel_variance < 0.0)
        throw std::invalid_argument("SystemConfig: channel_variance must be nonnegative");
    if (!(damping_data > 0.0) || damping_data > 1.0)
        throw std::invalid_argument("SystemConfig: damping_data must be in (0, 1]");
    if (!(damping_compute > 0.0) || damping_compute > 1.0)
        throw std::invalid_argument("SystemConfig: damping_compute must be in (0, 1]");
    if (iterations < 1) throw std::invalid_argument("SystemConfig: iterations must be at least 1");
}

ChannelMatrix generate_channel(const SystemConfig& cfg, RngStream& rng) {
    cfg.validate();
    ChannelMatrix h(cfg.n_antennas, cfg.n_users);
    const CVector coeffs =
        sample_complex_gaussian(rng, h.size(), Complex(0.0, 0.0), cfg.channel_variance);
    std::copy(coeffs.begin(), coeffs.end(), h.begin());
    return h;
}

CVector qpsk_modulate(std::span<const std::uint8_t> bits, double data_power) {
    if (bits.size() % 2 != 0) throw std::invalid_argument("qpsk_modulate: bit count must be even");
    const double amp = std::sqrt(data_power / 2.0);
    CVector symbols(bits.size() / 2);
    for (std::size_t k = 0; k < symbols.size(); ++k) {
        symbols[k] = Complex(amp * (1.0 - 2.0 * bits[2 * k]), amp * (1.0 - 2.0 * bits[2 * k + 1]));
    }
    return symbols;
}

std::vector<std::uint8_t> qpsk_demodulate(std::span<const Complex> symbols) {
    std::vector<std::uint8_t> bits(2 * symbols.size());
    for (std::size_t k = 0; k < symbols.size(); ++k) {
        bits[2 * k] = symbols[k].real() < 0.0 ? 1 : 0;
        bits[2 * k + 1] = symbols[k].imag() < 0.0 ? 1 : 0;
    }
    return bits;
}

TransmitFrame generate_frame(const SystemConfig& cfg, RngStream& rng) {
    cfg.validate();
    TransmitFrame frame;
    frame.bits = sample_bits(rng, 2 * cfg.n_users);
    frame.data = qpsk_modulate(frame.bits, cfg.data_power);
    frame.compute = sample_real_gaussian(rng, cfg.n_users, cfg.compute_mean, cfg.compute_variance);
    frame.x.resize(cfg.n_users);
    for (std::size_t k = 0; k < cfg.n_users; ++k) frame.x[k] = frame.data[k] + frame.compute[k];
    return frame;
}

CVector transmit(const SystemConfig& cfg, const ChannelMatrix& channel, const TransmitFrame& frame,
                 RngStream& rng) {
    if (channel.rows() != cfg.n_antennas || channel.cols() != cfg.n_users)
        throw std::invalid_argument("transmit: channel dimensions do not match the config");
    if (frame.x.size() != cfg.n_users)
        throw std::invalid_argument("transmit: frame dimensions do not match the config");
    CVector received = matvec(channel, frame.x);
    const CVector noise =
        sample_complex_gaussian(rng, cfg.n_antennas, Complex(0.0, 0.0), cfg.noise_variance);
    for (std::size_t n = 0; n < received.size(); ++n) received[n] += noise[n];
    return received;
}

double sum_target(std::span<const double> compute) {
    double acc = 0.0;
    for (double v : compute) acc += v;
    return acc;
}

}  // namespace icc
