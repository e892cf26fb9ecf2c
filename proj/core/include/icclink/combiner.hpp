#pragma once

#include <span>

#include "icclink/detector.hpp"

namespace icc {

/// MMSE combining vector for the sum target. Solves
///   (H (cv I + diag(data_mse)) H^H + nv I) u = cv * H * 1
/// where cv is the computing-signal variance and nv the noise variance.
/// data_mse holds the per-user residual data error variances; an empty span
/// means perfect data knowledge (all zeros). The N x N system is solved by
/// factorization, never by forming an inverse.
CVector compute_combiner(const ChannelMatrix& channel, double compute_variance,
                         double noise_variance, std::span<const double> data_mse = {});

/// Applies the combiner to the residual after cancelling the detected data:
/// Re{u^H (y - H d_hat)}. A nonzero compute_mean recentres the residual by
/// compute_mean * H * 1 before combining and adds n_users * compute_mean
/// back afterwards (the combiner itself assumes zero-mean signals).
double apply_combiner(const CVector& weights, const CVector& received, const ChannelMatrix& channel,
                      const CVector& data_symbols, double compute_mean = 0.0);

/// Diagonal of the data error covariance fed to the combiner: the per-user
/// replica variances averaged over antennas at the final iteration.
RVector data_mse_diagonal(const DetectionResult& result);

}  // namespace icc
