#include "icclink/combiner.hpp"

#include <stdexcept>

namespace icc {

CVector compute_combiner(const ChannelMatrix& channel, double compute_variance,
                         double noise_variance, std::span<const double> data_mse) {
    const std::size_t n_rows = channel.rows();
    const std::size_t n_cols = channel.cols();
    if (!data_mse.empty() && data_mse.size() != n_cols)
        throw std::invalid_argument("compute_combiner: data_mse size mismatch");

    // A = H diag(compute_variance + data_mse) H^H + noise_variance I.
    // Only the lower triangle is assembled; the solver reads nothing else.
    CMatrix a(n_rows, n_rows);
    for (std::size_t k = 0; k < n_cols; ++k) {
        const double scale = compute_variance + (data_mse.empty() ? 0.0 : data_mse[k]);
        for (std::size_t i = 0; i < n_rows; ++i) {
            const Complex hik = channel(i, k) * scale;
            for (std::size_t j = 0; j <= i; ++j) a(i, j) += hik * std::conj(channel(j, k));
        }
    }
    for (std::size_t i = 0; i < n_rows; ++i) a(i, i) += noise_variance;

    // Right-hand side: compute_variance * H * 1.
    CVector rhs(n_rows, 0.0);
    for (std::size_t i = 0; i < n_rows; ++i) {
        Complex acc = 0.0;
        for (std::size_t k = 0; k < n_cols; ++k) acc += channel(i, k);
        rhs[i] = compute_variance * acc;
    }
    return hermitian_solve(a, rhs);
}

double apply_combiner(const CVector& weights, const CVector& received, const ChannelMatrix& channel,
                      const CVector& data_symbols, double compute_mean) {
    const std::size_t n_rows = channel.rows();
    const std::size_t n_cols = channel.cols();
    if (weights.size() != n_rows || received.size() != n_rows || data_symbols.size() != n_cols)
        throw std::invalid_argument("apply_combiner: dimension mismatch");

    Complex acc = 0.0;
    for (std::size_t n = 0; n < n_rows; ++n) {
        Complex cancelled = 0.0;
        for (std::size_t k = 0; k < n_cols; ++k)
            cancelled += channel(n, k) * (data_symbols[k] + compute_mean);
        acc += std::conj(weights[n]) * (received[n] - cancelled);
    }
    return acc.real() + compute_mean * static_cast<double>(n_cols);
}

RVector data_mse_diagonal(const DetectionResult& result) {
    return result.data_mse;
}

}  // namespace icc
