#include "icclink/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace icc {

std::pair<std::uint64_t, std::uint64_t> count_bit_errors(std::span<const std::uint8_t> tx_bits,
                                                         std::span<const Complex> data_symbols) {
    if (tx_bits.size() != 2 * data_symbols.size())
        throw std::invalid_argument("count_bit_errors: bit/symbol count mismatch");
    const std::vector<std::uint8_t> rx_bits = qpsk_demodulate(data_symbols);
    std::uint64_t errors = 0;
    for (std::size_t i = 0; i < tx_bits.size(); ++i) errors += tx_bits[i] != rx_bits[i];
    return {errors, tx_bits.size()};
}

double nmse(double f_true, double f_hat, double normalizer) {
    if (!(normalizer > 0.0)) throw std::domain_error("nmse: normalizer must be positive");
    const double err = f_true - f_hat;
    return err * err / normalizer;
}

double wilson_halfwidth(std::uint64_t errors, std::uint64_t total) {
    if (total == 0) return 0.0;
    constexpr double z = 1.959963984540054;  // 97.5th percentile of N(0,1)
    const double n = static_cast<double>(total);
    const double p = static_cast<double>(errors) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    return z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
}

DetectionResult genie_data_detection(const SystemConfig& cfg, const CVector& received,
                                     const ChannelMatrix& channel,
                                     std::span<const double> compute_truth) {
    DetectorOptions opts;
    opts.known_compute = compute_truth;
    return run_detector(cfg, received, channel, opts);
}

double genie_compute_estimate(const SystemConfig& cfg, const CVector& received,
                              const ChannelMatrix& channel, const CVector& data_truth) {
    const CVector weights =
        compute_combiner(channel, cfg.compute_variance, cfg.noise_variance, {});
    return apply_combiner(weights, received, channel, data_truth, cfg.compute_mean);
}

}  // namespace icc
