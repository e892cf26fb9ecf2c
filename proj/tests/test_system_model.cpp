#include <doctest.h>

#include <cmath>

#include "icclink/system_model.hpp"
#include "support/reference.hpp"

using namespace icc;

namespace {

SystemConfig base_config() {
    SystemConfig cfg;
    cfg.n_antennas = 10;
    cfg.n_users = 2;
    return cfg;
}

}  // namespace

TEST_SUITE("system_model") {

TEST_CASE("config validation names the violated constraint") {
    SystemConfig cfg = base_config();
    CHECK_NOTHROW(cfg.validate());

    cfg.n_antennas = 1;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("n_antennas"), std::invalid_argument);
    cfg = base_config();
    cfg.n_users = 0;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("n_users"), std::invalid_argument);
    cfg = base_config();
    cfg.data_power = 0.9;  // power split no longer sums to one
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("transmit power"),
                         std::invalid_argument);
    cfg = base_config();
    cfg.damping_data = 0.0;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("damping_data"), std::invalid_argument);
    cfg = base_config();
    cfg.damping_compute = 1.5;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("damping_compute"),
                         std::invalid_argument);
    cfg = base_config();
    cfg.iterations = 0;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("iterations"), std::invalid_argument);
}

TEST_CASE("generate_channel: degenerate, statistical and reproducibility checks") {
    SystemConfig cfg = base_config();

    SUBCASE("zero channel variance gives the zero matrix") {
        cfg.channel_variance = 0.0;
        RngStream rng(1);
        const ChannelMatrix h = generate_channel(cfg, rng);
        for (const Complex& c : h) CHECK(c == Complex(0.0, 0.0));
    }
    SUBCASE("unit channel variance empirically") {
        cfg.n_antennas = 1000;
        cfg.n_users = 1000;
        RngStream rng(2);
        const ChannelMatrix h = generate_channel(cfg, rng);
        double acc = 0.0;
        for (const Complex& c : h) acc += std::norm(c);
        CHECK(acc / static_cast<double>(h.size()) == doctest::Approx(1.0).epsilon(0.01));
    }
    SUBCASE("fixed seed reproduces the realization") {
        RngStream a(9, 5), b(9, 5);
        CHECK(generate_channel(cfg, a) == generate_channel(cfg, b));
    }
}

TEST_CASE("qpsk_modulate: amplitudes and mapping") {
    const std::uint8_t bits00[] = {0, 0};
    const CVector one = qpsk_modulate(bits00, 2.0);
    CHECK(one.size() == 1);
    CHECK(one[0].real() == doctest::Approx(1.0));
    CHECK(one[0].imag() == doctest::Approx(1.0));

    const std::uint8_t bits11[] = {1, 1};
    const CVector low = qpsk_modulate(bits11, 0.99);
    const double amp = std::sqrt(0.495);
    CHECK(low[0].real() == doctest::Approx(-amp));
    CHECK(low[0].imag() == doctest::Approx(-amp));

    SUBCASE("every symbol carries exactly the constellation power") {
        RngStream rng(4);
        const auto bits = sample_bits(rng, 64);
        for (const Complex& d : qpsk_modulate(bits, 0.99))
            CHECK(std::norm(d) == doctest::Approx(0.99).epsilon(1e-12));
    }
    SUBCASE("odd bit count is rejected") {
        const std::uint8_t odd[] = {0, 1, 0};
        CHECK_THROWS_AS(qpsk_modulate(odd, 1.0), std::invalid_argument);
    }
}

TEST_CASE("qpsk_demodulate: sign slicing with deterministic tie-break") {
    const Complex symbols[] = {Complex(1, 1), Complex(-0.1, 0.9), Complex(0, 0)};
    const auto bits = qpsk_demodulate(symbols);
    CHECK(bits == std::vector<std::uint8_t>{0, 0, 1, 0, 0, 0});
}

TEST_CASE("modulate/demodulate round-trips every pattern up to 8 users") {
    for (std::size_t k = 1; k <= 8; ++k) {
        const std::size_t patterns = std::size_t{1} << (2 * k);
        for (std::size_t p = 0; p < patterns; ++p) {
            std::vector<std::uint8_t> bits(2 * k);
            for (std::size_t i = 0; i < 2 * k; ++i) bits[i] = (p >> i) & 1;
            const auto rx = qpsk_demodulate(qpsk_modulate(bits, 0.99));
            REQUIRE(rx == bits);
        }
    }
}

TEST_CASE("generate_frame") {
    SystemConfig cfg = base_config();

    SUBCASE("no computing signal collapses the superposition onto the data") {
        cfg.data_power = 1.0;
        cfg.compute_variance = 0.0;
        RngStream rng(3);
        const TransmitFrame f = generate_frame(cfg, rng);
        CHECK(f.x == f.data);
        for (double s : f.compute) CHECK(s == 0.0);
    }
    SUBCASE("per-user transmit power accounts to one") {
        cfg.n_users = 4;
        RngStream rng(5);
        double acc = 0.0;
        const int frames = 250000;
        for (int i = 0; i < frames; ++i) {
            const TransmitFrame f = generate_frame(cfg, rng);
            for (std::size_t k = 0; k < cfg.n_users; ++k) acc += std::norm(f.x[k]);
        }
        acc /= static_cast<double>(frames) * static_cast<double>(cfg.n_users);
        // E|x|^2 = data_power + compute_variance = 1 (cross term has zero mean)
        CHECK(acc == doctest::Approx(1.0).epsilon(0.01));
    }
    SUBCASE("fixed seed reproduces the frame") {
        RngStream a(8, 2), b(8, 2);
        const TransmitFrame fa = generate_frame(cfg, a);
        const TransmitFrame fb = generate_frame(cfg, b);
        CHECK(fa.bits == fb.bits);
        CHECK(fa.x == fb.x);
    }
}

TEST_CASE("transmit") {
    SystemConfig cfg = base_config();

    SUBCASE("all-ones single-user channel copies the signal to every antenna") {
        cfg.n_users = 1;
        cfg.noise_variance = 0.0;
        RngStream rng(6);
        const TransmitFrame f = generate_frame(cfg, rng);
        ChannelMatrix h(cfg.n_antennas, 1, Complex(1.0, 0.0));
        const CVector y = transmit(cfg, h, f, rng);
        for (const Complex& yn : y) CHECK(yn == f.x[0]);
    }
    SUBCASE("noiseless output equals the hand-computed product") {
        cfg.noise_variance = 0.0;
        RngStream rng(7);
        const ChannelMatrix h = generate_channel(cfg, rng);
        const TransmitFrame f = generate_frame(cfg, rng);
        const CVector y = transmit(cfg, h, f, rng);
        for (std::size_t n = 0; n < cfg.n_antennas; ++n) {
            Complex acc = 0.0;
            for (std::size_t k = 0; k < cfg.n_users; ++k) acc += h(n, k) * f.x[k];
            CHECK(icc::testing::rel_err(y[n], acc) < 1e-14);
        }
    }
    SUBCASE("zero channel and zero noise leave nothing") {
        cfg.channel_variance = 0.0;
        cfg.noise_variance = 0.0;
        RngStream rng(8);
        const ChannelMatrix h = generate_channel(cfg, rng);
        const TransmitFrame f = generate_frame(cfg, rng);
        for (const Complex& yn : transmit(cfg, h, f, rng)) CHECK(yn == Complex(0.0, 0.0));
    }
    SUBCASE("transmit is linear in the superposed signal") {
        cfg.noise_variance = 0.0;
        RngStream rng(9);
        const ChannelMatrix h = generate_channel(cfg, rng);
        TransmitFrame f1 = generate_frame(cfg, rng);
        TransmitFrame f2 = generate_frame(cfg, rng);
        TransmitFrame fsum = f1;
        for (std::size_t k = 0; k < cfg.n_users; ++k) fsum.x[k] = f1.x[k] + f2.x[k];
        const CVector y1 = transmit(cfg, h, f1, rng);
        const CVector y2 = transmit(cfg, h, f2, rng);
        const CVector ysum = transmit(cfg, h, fsum, rng);
        for (std::size_t n = 0; n < cfg.n_antennas; ++n)
            CHECK(icc::testing::rel_err(ysum[n], y1[n] + y2[n]) < 1e-12);
    }
    SUBCASE("dimension mismatch is rejected") {
        RngStream rng(10);
        const TransmitFrame f = generate_frame(cfg, rng);
        const ChannelMatrix wrong(cfg.n_antennas, cfg.n_users + 1);
        CHECK_THROWS_AS(transmit(cfg, wrong, f, rng), std::invalid_argument);
    }
}

TEST_CASE("sum_target") {
    const double v[] = {1.0, 2.0, 3.0};
    CHECK(sum_target(v) == 6.0);
    CHECK(sum_target(std::span<const double>{}) == 0.0);
    const double single[] = {-2.5};
    CHECK(sum_target(single) == -2.5);
    const double zeros[] = {0.0, 0.0, 0.0, 0.0};
    CHECK(sum_target(zeros) == 0.0);
}

}  // TEST_SUITE
