#pragma once

#include <cstdint>
#include <span>
#include <utility>

#include "icclink/combiner.hpp"
#include "icclink/detector.hpp"

namespace icc {

/// Raw per-trial measurements; merged additively across trials.
struct TrialMetrics {
    std::uint64_t bit_errors = 0;
    std::uint64_t bits = 0;
    double sq_error = 0.0;            // (f - f_hat)^2, combiner path
    double target_sq = 0.0;           // f^2
    double sq_error_consensus = 0.0;  // (f - sum_k s_hat_k)^2, consensus path

    TrialMetrics& operator+=(const TrialMetrics& other) {
        bit_errors += other.bit_errors;
        bits += other.bits;
        sq_error += other.sq_error;
        target_sq += other.target_sq;
        sq_error_consensus += other.sq_error_consensus;
        return *this;
    }
};

/// Slices the consensus data estimates and counts differing bits.
/// Returns (errors, total).
std::pair<std::uint64_t, std::uint64_t> count_bit_errors(std::span<const std::uint8_t> tx_bits,
                                                         std::span<const Complex> data_symbols);

/// (f_true - f_hat)^2 / normalizer. Throws std::domain_error on a
/// non-positive normalizer.
double nmse(double f_true, double f_hat, double normalizer);

/// 95% Wilson score half-width for an error proportion.
double wilson_halfwidth(std::uint64_t errors, std::uint64_t total);

/// Data-detection bound: the detector runs with the computing signals
/// revealed (replicas clamped to truth, zero variance), so only the data
/// symbols are estimated. Shares the regular detector code path.
DetectionResult genie_data_detection(const SystemConfig& cfg, const CVector& received,
                                     const ChannelMatrix& channel,
                                     std::span<const double> compute_truth);

/// Computing bound: the data symbols are revealed, so the combiner acts on
/// a residual free of data-detection error (zero data MSE).
double genie_compute_estimate(const SystemConfig& cfg, const CVector& received,
                              const ChannelMatrix& channel, const CVector& data_truth);

}  // namespace icc
