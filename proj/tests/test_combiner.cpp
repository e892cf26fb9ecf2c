#include <doctest.h>

#include <cmath>

#include "icclink/combiner.hpp"
#include "icclink/metrics.hpp"
#include "support/reference.hpp"

using namespace icc;
using icc::testing::random_channel;
using icc::testing::rel_err;

namespace {

// Expected squared error of the combined estimate as a quadratic in the
// weights: u^H A u - 2 cv Re{u^H H 1} + K cv, with
// A = H (cv I + diag(mse)) H^H + nv I.
double quadratic_objective(const CVector& u, const ChannelMatrix& h, double cv, double nv,
                           std::span<const double> mse) {
    const std::size_t n_rows = h.rows();
    const std::size_t n_cols = h.cols();
    double value = static_cast<double>(n_cols) * cv;
    // u^H A u built column by column: sum_k (cv + mse_k) |u^H h_k|^2 + nv |u|^2
    for (std::size_t k = 0; k < n_cols; ++k) {
        Complex uh = 0.0;
        for (std::size_t n = 0; n < n_rows; ++n) uh += std::conj(u[n]) * h(n, k);
        const double scale = cv + (mse.empty() ? 0.0 : mse[k]);
        value += scale * std::norm(uh);
    }
    for (std::size_t n = 0; n < n_rows; ++n) value += nv * std::norm(u[n]);
    Complex cross = 0.0;
    for (std::size_t n = 0; n < n_rows; ++n) {
        Complex row_sum = 0.0;
        for (std::size_t k = 0; k < n_cols; ++k) row_sum += h(n, k);
        cross += std::conj(u[n]) * row_sum;
    }
    value -= 2.0 * cv * cross.real();
    return value;
}

}  // namespace

TEST_SUITE("combiner") {

TEST_CASE("zero computing power zeroes the combiner") {
    RngStream rng(11);
    const ChannelMatrix h = random_channel(6, 3, rng);
    const CVector u = compute_combiner(h, 0.0, 0.1);
    for (const Complex& c : u) CHECK(c == Complex(0.0, 0.0));
}

TEST_CASE("scalar system reduces to the Wiener weight") {
    ChannelMatrix h(1, 1, Complex(0.8, 0.0));
    const double cv = 0.01, nv = 0.2;
    const CVector u = compute_combiner(h, cv, nv);
    const double expected = cv * 0.8 / (0.8 * 0.8 * cv + nv);
    CHECK(u[0].real() == doctest::Approx(expected).epsilon(1e-12));
    CHECK(u[0].imag() == doctest::Approx(0.0));
}

TEST_CASE("applying the combiner") {
    RngStream rng(13);
    const ChannelMatrix h = random_channel(5, 2, rng);
    const CVector d = sample_complex_gaussian(rng, 2, Complex(0, 0), 1.0);

    SUBCASE("zero weights give zero") {
        const CVector u(5, Complex(0.0, 0.0));
        const CVector y = sample_complex_gaussian(rng, 5, Complex(0, 0), 1.0);
        CHECK(apply_combiner(u, y, h, d) == 0.0);
    }
    SUBCASE("a fully explained observation leaves no residual") {
        const CVector u = sample_complex_gaussian(rng, 5, Complex(0, 0), 1.0);
        const CVector y = matvec(h, d);
        CHECK(std::abs(apply_combiner(u, y, h, d)) < 1e-12);
    }
    SUBCASE("dimension mismatches are rejected") {
        const CVector u(4);
        const CVector y(5);
        CHECK_THROWS_AS(apply_combiner(u, y, h, d), std::invalid_argument);
    }
}

TEST_CASE("known data and vanishing noise recover the sum exactly") {
    SystemConfig cfg;
    cfg.n_antennas = 8;
    cfg.n_users = 4;
    cfg.noise_variance = 0.0;
    RngStream rng(17);
    const ChannelMatrix h = generate_channel(cfg, rng);
    const TransmitFrame frame = generate_frame(cfg, rng);
    const CVector y = transmit(cfg, h, frame, rng);

    // A tiny regularizer stands in for the noise so the system stays PD.
    const CVector u = compute_combiner(h, cfg.compute_variance, 1e-12);
    const double f_hat = apply_combiner(u, y, h, frame.data);
    CHECK(f_hat == doctest::Approx(sum_target(frame.compute)).epsilon(1e-6));
}

TEST_CASE("genie estimate error shrinks linearly with the noise power") {
    SystemConfig cfg;
    cfg.n_antennas = 8;
    cfg.n_users = 4;
    RngStream rng(19);
    const ChannelMatrix h = generate_channel(cfg, rng);

    RVector mse_at_noise;
    const RVector noise_levels = {1e-2, 1e-4, 1e-6};
    for (double nv : noise_levels) {
        cfg.noise_variance = nv;
        double acc = 0.0;
        const int trials = 4000;
        for (int t = 0; t < trials; ++t) {
            RngStream trial_rng(20, static_cast<std::uint64_t>(t));
            const TransmitFrame frame = generate_frame(cfg, trial_rng);
            const CVector y = transmit(cfg, h, frame, trial_rng);
            const double f_hat = genie_compute_estimate(cfg, y, h, frame.data);
            const double err = sum_target(frame.compute) - f_hat;
            acc += err * err;
        }
        mse_at_noise.push_back(acc / trials);
    }
    // log-log slope of MSE against noise variance is about one.
    const double slope = std::log(mse_at_noise[0] / mse_at_noise[2]) /
                         std::log(noise_levels[0] / noise_levels[2]);
    CHECK(slope == doctest::Approx(1.0).epsilon(0.2));
}

TEST_CASE("the closed form is a strict local minimizer of the expected objective") {
    RngStream rng(23);
    for (int rep = 0; rep < 5; ++rep) {
        const std::size_t n_rows = 2 + rng.word() % 7;
        const std::size_t n_cols = 1 + rng.word() % 7;
        const ChannelMatrix h = random_channel(n_rows, n_cols, rng);
        const double cv = 0.01;
        const double nv = 0.05 + 0.5 * (rng.word() % 100) / 100.0;
        RVector mse(n_cols);
        for (double& v : mse) v = (rng.word() % 1000) / 1000.0 * 0.99;
        const CVector u = compute_combiner(h, cv, nv, mse);
        const double best = quadratic_objective(u, h, cv, nv, mse);
        for (int p = 0; p < 100; ++p) {
            CVector delta = sample_complex_gaussian(rng, n_rows, Complex(0, 0), 1.0);
            const double scale = 1e-3 / norm2(delta);
            CVector probe = u;
            for (std::size_t i = 0; i < n_rows; ++i) probe[i] += delta[i] * scale;
            CHECK(quadratic_objective(probe, h, cv, nv, mse) >= best);
        }
    }
}

TEST_CASE("user permutations leave the combiner unchanged") {
    RngStream rng(29);
    const std::size_t n_rows = 6, n_cols = 4;
    const ChannelMatrix h = random_channel(n_rows, n_cols, rng);
    RVector mse(n_cols);
    for (double& v : mse) v = (rng.word() % 1000) / 1000.0 * 0.99;
    const CVector u = compute_combiner(h, 0.01, 0.1, mse);

    // Rotate the user ordering and permute the error diagonal with it.
    ChannelMatrix h_perm(n_rows, n_cols);
    RVector mse_perm(n_cols);
    for (std::size_t k = 0; k < n_cols; ++k) {
        const std::size_t src = (k + 1) % n_cols;
        for (std::size_t n = 0; n < n_rows; ++n) h_perm(n, k) = h(n, src);
        mse_perm[k] = mse[src];
    }
    const CVector u_perm = compute_combiner(h_perm, 0.01, 0.1, mse_perm);
    for (std::size_t n = 0; n < n_rows; ++n) CHECK(std::abs(u[n] - u_perm[n]) < 1e-8);
}

TEST_CASE("data error diagonal is the antenna-averaged replica variance") {
    DetectionResult result;
    result.data_mse = {0.4, 0.0, 0.99};
    const RVector diag = data_mse_diagonal(result);
    CHECK(diag == result.data_mse);

    SUBCASE("bounds carried over from a detector run") {
        SystemConfig cfg;
        cfg.n_antennas = 4;
        cfg.n_users = 2;
        cfg.noise_variance = 0.5;
        RngStream rng(31);
        const ChannelMatrix h = generate_channel(cfg, rng);
        const TransmitFrame frame = generate_frame(cfg, rng);
        const CVector y = transmit(cfg, h, frame, rng);
        const DetectionResult res = run_detector(cfg, y, h);
        for (double v : data_mse_diagonal(res)) {
            CHECK(v >= 0.0);
            CHECK(v <= cfg.data_power);
        }
    }
}

TEST_CASE("mean recentring: zero mean is a no-op, known mean round-trips") {
    SystemConfig cfg;
    cfg.n_antennas = 8;
    cfg.n_users = 3;
    cfg.compute_mean = 0.3;
    cfg.noise_variance = 1e-10;
    RngStream rng(37);
    const ChannelMatrix h = generate_channel(cfg, rng);
    const TransmitFrame frame = generate_frame(cfg, rng);
    const CVector y = transmit(cfg, h, frame, rng);
    const CVector u = compute_combiner(h, cfg.compute_variance, cfg.noise_variance);
    // Recentring by the true mean makes the zero-mean combiner exact again.
    const double f_hat = apply_combiner(u, y, h, frame.data, cfg.compute_mean);
    CHECK(f_hat == doctest::Approx(sum_target(frame.compute)).epsilon(1e-4));
}

}  // TEST_SUITE
