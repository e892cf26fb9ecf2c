#include <doctest.h>

#include <sstream>

#include "icclink/config.hpp"

using namespace icc;

TEST_SUITE("config") {

TEST_CASE("parsing a full key = value file") {
    std::istringstream in(R"(# scenario parameters
n_antennas = 10
n_users = 5          # overridden by the scenario list below
data_power = 0.99
compute_variance = 0.01
compute_mean = 0
channel_variance = 1
damping_data = 0.5
damping_compute = 0.8
iterations = 30
mean_mode = known-zero
scenarios = 10x2, 10x5
variants = joint-adaptive, genie-data
snr_min_db = 0
snr_max_db = 16
snr_step_db = 4
min_trials = 50
min_bit_errors = 10
max_trials = 500
workers = 2
seed = 12345
out = result.csv
)");
    const RunConfig cfg = parse_run_config(in);
    CHECK(cfg.system.n_antennas == 10);
    CHECK(cfg.system.mean_mode == MeanMode::KnownZero);
    CHECK(cfg.scenario_antennas == std::vector<std::size_t>{10, 10});
    CHECK(cfg.scenario_users == std::vector<std::size_t>{2, 5});
    CHECK(cfg.variants == std::vector<Variant>{Variant::JointAdaptive, Variant::GenieData});
    CHECK(cfg.snr_grid() == std::vector<double>{0.0, 4.0, 8.0, 12.0, 16.0});
    CHECK(cfg.stopping.min_trials == 50);
    CHECK(cfg.stopping.min_bit_errors == 10);
    CHECK(cfg.stopping.max_trials == 500);
    CHECK(cfg.workers == 2);
    CHECK(cfg.master_seed == 12345);
    CHECK(cfg.output_path == "result.csv");
    CHECK_NOTHROW(cfg.validate());

    const auto scenarios = cfg.scenarios();
    REQUIRE(scenarios.size() == 4);  // 2 dimension pairs x 2 variants
    CHECK(scenarios[0].name == "N10K2");
    CHECK(scenarios[0].variant == Variant::JointAdaptive);
    CHECK(scenarios[1].variant == Variant::GenieData);
    CHECK(scenarios[2].name == "N10K5");
}

TEST_CASE("parse errors carry enough context") {
    std::istringstream unknown("nonsense_key = 1\n");
    CHECK_THROWS_WITH_AS(parse_run_config(unknown), doctest::Contains("nonsense_key"),
                         std::invalid_argument);

    std::istringstream bad_number("data_power = banana\n");
    CHECK_THROWS_WITH_AS(parse_run_config(bad_number), doctest::Contains("data_power"),
                         std::invalid_argument);

    std::istringstream no_pair("just some words\n");
    CHECK_THROWS_AS(parse_run_config(no_pair), std::invalid_argument);

    std::istringstream bad_variant("variants = joint-adaptive, psychic\n");
    CHECK_THROWS_WITH_AS(parse_run_config(bad_variant), doctest::Contains("psychic"),
                         std::invalid_argument);

    std::istringstream bad_scenario("scenarios = 10by2\n");
    CHECK_THROWS_AS(parse_run_config(bad_scenario), std::invalid_argument);

    CHECK_THROWS_WITH_AS(parse_run_config_file("/definitely/not/a/file"),
                         doctest::Contains("cannot open"), std::invalid_argument);
}

TEST_CASE("serialization round-trips exactly") {
    RunConfig cfg = small_system_preset();
    cfg.master_seed = 909;
    cfg.workers = 3;
    cfg.output_path = "somewhere.csv";
    std::ostringstream first;
    serialize_run_config(first, cfg);

    std::istringstream in(first.str());
    const RunConfig reparsed = parse_run_config(in);
    std::ostringstream second;
    serialize_run_config(second, reparsed);
    CHECK(first.str() == second.str());
}

TEST_CASE("validation catches inconsistent run settings") {
    RunConfig cfg = small_system_preset();
    CHECK_NOTHROW(cfg.validate());

    RunConfig bad = cfg;
    bad.snr_step_db = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = cfg;
    bad.snr_max_db = -10.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = cfg;
    bad.stopping.min_trials = 10;
    bad.stopping.max_trials = 5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = cfg;
    bad.variants.clear();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = cfg;
    bad.system.data_power = 0.5;  // breaks the unit power split
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("presets pin the reference parameter block") {
    const RunConfig fig2 = small_system_preset();
    CHECK(fig2.system.data_power == 0.99);
    CHECK(fig2.system.compute_variance == 0.01);
    CHECK(fig2.system.damping_data == 0.5);
    CHECK(fig2.system.damping_compute == 0.8);
    CHECK(fig2.system.iterations == 30);
    CHECK(fig2.system.channel_variance == 1.0);
    CHECK(fig2.scenario_antennas == std::vector<std::size_t>{10, 10, 10});
    CHECK(fig2.scenario_users == std::vector<std::size_t>{2, 5, 10});
    CHECK(fig2.variants.size() == 4);
    CHECK(fig2.snr_grid().size() == 9);  // 0 through 32 in steps of 4
    CHECK(fig2.snr_grid().front() == 0.0);
    CHECK(fig2.snr_grid().back() == 32.0);

    const RunConfig fig3 = massive_system_preset();
    CHECK(fig3.scenario_antennas == std::vector<std::size_t>{200, 200, 200});
    CHECK(fig3.scenario_users == std::vector<std::size_t>{50, 100, 200});
    CHECK(fig3.system.iterations == 30);
    CHECK(fig3.variants.size() == 4);
}

}  // TEST_SUITE
