#pragma once

#include <span>
#include <vector>

#include "icclink/system_model.hpp"

namespace icc {

/// Lower bound applied to every variance that ends up in a denominator.
/// Numerically inert at realistic noise levels; it only matters in noiseless
/// tests where cancellation is perfect.
inline constexpr double kVarianceFloor = 1e-12;

/// Per-edge soft replicas and their error variances. Entry (n, k) is the
/// replica of user k's signal held by antenna n.
struct GabpState {
    CMatrix data_est;   // soft data symbol replicas
    RMatrix data_var;   // in [0, data_power]
    RMatrix comp_est;   // soft computing signal replicas
    RMatrix comp_var;   // in [0, compute_variance]
    double comp_mean = 0.0;  // running estimate of the computing signal mean
    int iteration = 0;
};

/// Per-edge observations after soft interference cancellation, with the
/// variance of the residual interference-plus-noise.
struct SicGrids {
    CMatrix data_obs;
    RMatrix data_var;  // >= kVarianceFloor
    CMatrix comp_obs;
    RMatrix comp_var;  // >= kVarianceFloor
};

/// Extrinsic beliefs: the belief at (n, k) combines every antenna except n.
struct BeliefGrids {
    CMatrix data_mean;
    RMatrix data_var;  // > 0
    CMatrix comp_mean;
    RMatrix comp_var;  // > 0
};

struct IterationTrace {
    int iteration = 0;
    double mean_data_var = 0.0;
    double mean_comp_var = 0.0;
    double comp_mean = 0.0;
};

struct DetectionResult {
    CVector data_symbols;  // consensus data estimates, one per user, not sliced
    RVector comp_signals;  // consensus computing estimates at the final iteration
    RVector data_mse;      // per-user data error variance averaged over antennas
    SicGrids final_sic;    // cancellation grids of the final iteration
    double comp_mean = 0.0;
    std::vector<IterationTrace> trace;  // filled only when requested
};

struct DetectorOptions {
    bool collect_trace = false;
    /// When non-empty (one value per user), the computing-signal replicas are
    /// clamped to these values with zero variance on every iteration, i.e.
    /// the detector runs with the computing signals revealed.
    std::span<const double> known_compute = {};
};

/// Replicas start at zero with maximal uncertainty: data variances at
/// data_power, computing variances at compute_variance, mean estimate 0.
GabpState init_state(const SystemConfig& cfg);

/// Per-edge cancellation: for each branch, subtract the soft replicas of all
/// interfering signals (the other users of the same branch plus every user
/// of the opposite branch) from the received sample, and accumulate the
/// matching residual variances.
void soft_interference_cancellation(const CVector& received, const ChannelMatrix& channel,
                                    const GabpState& state, double noise_variance, SicGrids& out);

/// Variance-weighted extrinsic combining down each column, excluding the
/// target antenna. The exclusion is exact by construction (prefix/suffix
/// partial sums), and the total cost stays linear in the grid size.
/// Requires at least two antennas.
void generate_beliefs(const SicGrids& sic, const ChannelMatrix& channel, BeliefGrids& out);

/// Posterior mean of the data symbols under the QPSK prior:
/// amp * (tanh(2 amp Re{b}/var) + j tanh(2 amp Im{b}/var)).
void denoise_data(const BeliefGrids& beliefs, double data_power, CMatrix& est_out);

/// Residual error variance of data replicas: data_power - |est|^2, floored
/// at zero.
void data_replica_variance(const CMatrix& est, double data_power, RMatrix& var_out);

/// Posterior mean/variance of the computing signals under their Gaussian
/// prior; only the real part of the belief is used since the computing
/// signals are real.
void denoise_compute(const BeliefGrids& beliefs, double compute_variance, double prior_mean,
                     RMatrix& est_out, RMatrix& var_out);

/// accum = beta * fresh + (1 - beta) * accum, element-wise. beta == 1
/// reproduces fresh exactly.
template <typename T>
void damp(Grid<T>& accum, const Grid<T>& fresh, double beta) {
    if (!accum.same_shape(fresh)) throw std::invalid_argument("damp: shape mismatch");
    if (!(beta > 0.0) || beta > 1.0) throw std::invalid_argument("damp: beta must be in (0, 1]");
    const T* src = fresh.data();
    T* dst = accum.data();
    const double keep = 1.0 - beta;
    for (std::size_t i = 0; i < accum.size(); ++i) dst[i] = beta * src[i] + keep * dst[i];
}

/// Per-user consensus for the computing branch: variance-weighted fusion of
/// all antennas, real part taken since the signals are real.
RVector consensus_compute(const SicGrids& sic, const ChannelMatrix& channel);

/// Per-user consensus for the data branch (complex, not sliced).
CVector consensus_data(const SicGrids& sic, const ChannelMatrix& channel);

double mean_of(std::span<const double> values);

/// Column means over antennas; used for the per-user averaged data MSE.
RVector average_over_antennas(const RMatrix& grid);

/// Runs the full message-passing loop for cfg.iterations rounds and fuses
/// the per-antenna evidence into per-user estimates. Each iteration ends by
/// refreshing the cancellation grids with the updated replicas; the
/// per-iteration computing consensus (and thus the adaptive mean estimate)
/// reads those refreshed grids.
DetectionResult run_detector(const SystemConfig& cfg, const CVector& received,
                             const ChannelMatrix& channel, const DetectorOptions& opts = {});

}  // namespace icc
