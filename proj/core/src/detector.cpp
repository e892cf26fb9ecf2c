#include "icclink/detector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace icc {

namespace {

void clamp_compute_replicas(GabpState& state, std::span<const double> truth) {
    for (std::size_t n = 0; n < state.comp_est.rows(); ++n) {
        for (std::size_t k = 0; k < state.comp_est.cols(); ++k) {
            state.comp_est(n, k) = truth[k];
            state.comp_var(n, k) = 0.0;
        }
    }
}

double grid_mean(const RMatrix& g) {
    double acc = 0.0;
    for (double v : g) acc += v;
    return g.size() ? acc / static_cast<double>(g.size()) : 0.0;
}

}  // namespace

GabpState init_state(const SystemConfig& cfg) {
    cfg.validate();
    GabpState state;
    state.data_est.resize(cfg.n_antennas, cfg.n_users);
    state.data_var = RMatrix(cfg.n_antennas, cfg.n_users, cfg.data_power);
    state.comp_est = RMatrix(cfg.n_antennas, cfg.n_users, 0.0);
    state.comp_var = RMatrix(cfg.n_antennas, cfg.n_users, cfg.compute_variance);
    state.comp_mean = 0.0;
    state.iteration = 0;
    return state;
}

void soft_interference_cancellation(const CVector& received, const ChannelMatrix& channel,
                                    const GabpState& state, double noise_variance, SicGrids& out) {
    const std::size_t n_rows = channel.rows();
    const std::size_t n_cols = channel.cols();
    if (received.size() != n_rows)
        throw std::invalid_argument("soft_interference_cancellation: dimension mismatch");
    if (!state.data_est.same_shape(state.data_var) || state.data_est.rows() != n_rows ||
        state.data_est.cols() != n_cols)
        throw std::invalid_argument("soft_interference_cancellation: state shape mismatch");

    if (!out.data_obs.same_shape(channel)) {
        out.data_obs.resize(n_rows, n_cols);
        out.data_var.resize(n_rows, n_cols);
        out.comp_obs.resize(n_rows, n_cols);
        out.comp_var.resize(n_rows, n_cols);
    }

    for (std::size_t n = 0; n < n_rows; ++n) {
        // Full row sums once, then each user's own contribution is added back.
        Complex data_sum = 0.0;
        Complex comp_sum = 0.0;
        double data_var_sum = 0.0;
        double comp_var_sum = 0.0;
        for (std::size_t k = 0; k < n_cols; ++k) {
            const Complex h = channel(n, k);
            const double hsq = std::norm(h);
            data_sum += h * state.data_est(n, k);
            comp_sum += h * state.comp_est(n, k);
            data_var_sum += hsq * state.data_var(n, k);
            comp_var_sum += hsq * state.comp_var(n, k);
        }
        const Complex y = received[n];
        for (std::size_t k = 0; k < n_cols; ++k) {
            const Complex h = channel(n, k);
            const double hsq = std::norm(h);
            out.data_obs(n, k) = y - (data_sum - h * state.data_est(n, k)) - comp_sum;
            out.data_var(n, k) = std::max(
                (data_var_sum - hsq * state.data_var(n, k)) + comp_var_sum + noise_variance,
                kVarianceFloor);
            out.comp_obs(n, k) = y - (comp_sum - h * state.comp_est(n, k)) - data_sum;
            out.comp_var(n, k) = std::max(
                (comp_var_sum - hsq * state.comp_var(n, k)) + data_var_sum + noise_variance,
                kVarianceFloor);
        }
    }
}

void generate_beliefs(const SicGrids& sic, const ChannelMatrix& channel, BeliefGrids& out) {
    const std::size_t n_rows = channel.rows();
    const std::size_t n_cols = channel.cols();
    if (n_rows < 2)
        throw std::invalid_argument("generate_beliefs: at least two antennas are required");
    if (!sic.data_obs.same_shape(channel))
        throw std::invalid_argument("generate_beliefs: grid shape mismatch");

    if (!out.data_mean.same_shape(channel)) {
        out.data_mean.resize(n_rows, n_cols);
        out.data_var.resize(n_rows, n_cols);
        out.comp_mean.resize(n_rows, n_cols);
        out.comp_var.resize(n_rows, n_cols);
    }

    // Per-column weighted terms and their suffix sums. Combining the prefix
    // below row n with the suffix above it never touches row n itself, so
    // the extrinsic exclusion is exact, not a cancellation.
    std::vector<double> wd(n_rows), ws(n_rows);
    std::vector<Complex> md(n_rows), ms(n_rows);
    std::vector<double> wd_suffix(n_rows + 1), ws_suffix(n_rows + 1);
    std::vector<Complex> md_suffix(n_rows + 1), ms_suffix(n_rows + 1);

    for (std::size_t k = 0; k < n_cols; ++k) {
        for (std::size_t n = 0; n < n_rows; ++n) {
            const Complex h = channel(n, k);
            const double hsq = std::norm(h);
            wd[n] = hsq / sic.data_var(n, k);
            ws[n] = hsq / sic.comp_var(n, k);
            md[n] = std::conj(h) * sic.data_obs(n, k) / sic.data_var(n, k);
            ms[n] = std::conj(h) * sic.comp_obs(n, k) / sic.comp_var(n, k);
        }
        wd_suffix[n_rows] = 0.0;
        ws_suffix[n_rows] = 0.0;
        md_suffix[n_rows] = 0.0;
        ms_suffix[n_rows] = 0.0;
        for (std::size_t n = n_rows; n-- > 0;) {
            wd_suffix[n] = wd_suffix[n + 1] + wd[n];
            ws_suffix[n] = ws_suffix[n + 1] + ws[n];
            md_suffix[n] = md_suffix[n + 1] + md[n];
            ms_suffix[n] = ms_suffix[n + 1] + ms[n];
        }
        double wd_prefix = 0.0;
        double ws_prefix = 0.0;
        Complex md_prefix = 0.0;
        Complex ms_prefix = 0.0;
        for (std::size_t n = 0; n < n_rows; ++n) {
            const double dvar =
                std::max(1.0 / std::max(wd_prefix + wd_suffix[n + 1], kVarianceFloor),
                         kVarianceFloor);
            const double svar =
                std::max(1.0 / std::max(ws_prefix + ws_suffix[n + 1], kVarianceFloor),
                         kVarianceFloor);
            out.data_var(n, k) = dvar;
            out.comp_var(n, k) = svar;
            out.data_mean(n, k) = dvar * (md_prefix + md_suffix[n + 1]);
            out.comp_mean(n, k) = svar * (ms_prefix + ms_suffix[n + 1]);
            wd_prefix += wd[n];
            ws_prefix += ws[n];
            md_prefix += md[n];
            ms_prefix += ms[n];
        }
    }
}

void denoise_data(const BeliefGrids& beliefs, double data_power, CMatrix& est_out) {
    const double amp = std::sqrt(data_power / 2.0);
    if (!est_out.same_shape(beliefs.data_mean))
        est_out.resize(beliefs.data_mean.rows(), beliefs.data_mean.cols());
    const Complex* mean = beliefs.data_mean.data();
    const double* var = beliefs.data_var.data();
    Complex* est = est_out.data();
    for (std::size_t i = 0; i < est_out.size(); ++i) {
        const double scale = 2.0 * amp / var[i];
        est[i] = Complex(amp * std::tanh(scale * mean[i].real()),
                         amp * std::tanh(scale * mean[i].imag()));
    }
}

void data_replica_variance(const CMatrix& est, double data_power, RMatrix& var_out) {
    if (!var_out.same_shape(est)) var_out.resize(est.rows(), est.cols());
    const Complex* e = est.data();
    double* v = var_out.data();
    for (std::size_t i = 0; i < est.size(); ++i) v[i] = std::max(data_power - std::norm(e[i]), 0.0);
}

void denoise_compute(const BeliefGrids& beliefs, double compute_variance, double prior_mean,
                     RMatrix& est_out, RMatrix& var_out) {
    if (!est_out.same_shape(beliefs.comp_mean))
        est_out.resize(beliefs.comp_mean.rows(), beliefs.comp_mean.cols());
    if (!var_out.same_shape(beliefs.comp_mean))
        var_out.resize(beliefs.comp_mean.rows(), beliefs.comp_mean.cols());
    const Complex* mean = beliefs.comp_mean.data();
    const double* var = beliefs.comp_var.data();
    double* est = est_out.data();
    double* outv = var_out.data();
    for (std::size_t i = 0; i < est_out.size(); ++i) {
        const double denom = var[i] + compute_variance;
        est[i] = (compute_variance * mean[i].real() + var[i] * prior_mean) / denom;
        outv[i] = compute_variance * var[i] / denom;
    }
}

RVector consensus_compute(const SicGrids& sic, const ChannelMatrix& channel) {
    RVector out(channel.cols());
    for (std::size_t k = 0; k < channel.cols(); ++k) {
        double weight = 0.0;
        Complex acc = 0.0;
        for (std::size_t n = 0; n < channel.rows(); ++n) {
            const Complex h = channel(n, k);
            const double var = sic.comp_var(n, k);
            weight += std::norm(h) / var;
            acc += std::conj(h) * sic.comp_obs(n, k) / var;
        }
        out[k] = acc.real() / std::max(weight, kVarianceFloor);
    }
    return out;
}

CVector consensus_data(const SicGrids& sic, const ChannelMatrix& channel) {
    CVector out(channel.cols());
    for (std::size_t k = 0; k < channel.cols(); ++k) {
        double weight = 0.0;
        Complex acc = 0.0;
        for (std::size_t n = 0; n < channel.rows(); ++n) {
            const Complex h = channel(n, k);
            const double var = sic.data_var(n, k);
            weight += std::norm(h) / var;
            acc += std::conj(h) * sic.data_obs(n, k) / var;
        }
        out[k] = acc / std::max(weight, kVarianceFloor);
    }
    return out;
}

double mean_of(std::span<const double> values) {
    if (values.empty()) return 0.0;
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc / static_cast<double>(values.size());
}

RVector average_over_antennas(const RMatrix& grid) {
    RVector out(grid.cols(), 0.0);
    for (std::size_t n = 0; n < grid.rows(); ++n)
        for (std::size_t k = 0; k < grid.cols(); ++k) out[k] += grid(n, k);
    if (grid.rows() > 0)
        for (double& v : out) v /= static_cast<double>(grid.rows());
    return out;
}

DetectionResult run_detector(const SystemConfig& cfg, const CVector& received,
                             const ChannelMatrix& channel, const DetectorOptions& opts) {
    cfg.validate();
    if (channel.rows() != cfg.n_antennas || channel.cols() != cfg.n_users)
        throw std::invalid_argument("run_detector: channel dimensions do not match the config");
    if (received.size() != cfg.n_antennas)
        throw std::invalid_argument("run_detector: received vector dimension mismatch");
    const bool clamped = !opts.known_compute.empty();
    if (clamped && opts.known_compute.size() != cfg.n_users)
        throw std::invalid_argument("run_detector: known_compute size mismatch");

    GabpState state = init_state(cfg);
    if (clamped) clamp_compute_replicas(state, opts.known_compute);

    SicGrids sic;
    BeliefGrids beliefs;
    CMatrix data_denoised;
    RMatrix data_var_fresh;
    RMatrix comp_denoised;
    RMatrix comp_var_fresh;

    // The cancellation grids are refreshed right after the replica updates,
    // so each iteration's consensus (and the running mean estimate derived
    // from it) already benefits from this round's interference removal.
    // Feeding a stale consensus into the mean estimate lets early data
    // leakage poison the computing prior and the iteration can lock into a
    // limit cycle instead of converging. The refreshed grids double as the
    // next iteration's cancellation input, so the per-iteration cost is
    // unchanged.
    soft_interference_cancellation(received, channel, state, cfg.noise_variance, sic);

    DetectionResult result;
    for (int iter = 1; iter <= cfg.iterations; ++iter) {
        generate_beliefs(sic, channel, beliefs);

        // Data branch: denoise, damp the means, then refresh the error
        // variances from the damped means and damp those too.
        denoise_data(beliefs, cfg.data_power, data_denoised);
        damp(state.data_est, data_denoised, cfg.damping_data);
        data_replica_variance(state.data_est, cfg.data_power, data_var_fresh);
        damp(state.data_var, data_var_fresh, cfg.damping_data);

        // Computing branch: the prior mean is the running estimate from the
        // previous iteration, or zero when the mean is trusted known.
        const double prior_mean =
            cfg.mean_mode == MeanMode::Adaptive ? state.comp_mean : 0.0;
        denoise_compute(beliefs, cfg.compute_variance, prior_mean, comp_denoised, comp_var_fresh);
        damp(state.comp_est, comp_denoised, cfg.damping_compute);
        damp(state.comp_var, comp_var_fresh, cfg.damping_compute);
        if (clamped) clamp_compute_replicas(state, opts.known_compute);

        soft_interference_cancellation(received, channel, state, cfg.noise_variance, sic);
        RVector comp_consensus = consensus_compute(sic, channel);
        // The running mean is damped like every other fed-back quantity;
        // an undamped mean can lock the iteration into a limit cycle when
        // an early consensus still carries data leakage.
        state.comp_mean = cfg.damping_compute * mean_of(comp_consensus) +
                          (1.0 - cfg.damping_compute) * state.comp_mean;
        state.iteration = iter;

        if (opts.collect_trace) {
            result.trace.push_back({iter, grid_mean(state.data_var), grid_mean(state.comp_var),
                                    state.comp_mean});
        }
        if (iter == cfg.iterations) result.comp_signals = std::move(comp_consensus);
    }

    result.data_symbols = consensus_data(sic, channel);
    result.data_mse = average_over_antennas(state.data_var);
    result.comp_mean = state.comp_mean;
    result.final_sic = std::move(sic);
    return result;
}

}  // namespace icc
