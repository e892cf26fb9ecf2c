// icc-sim: link-level simulation driver for the joint detection and
// over-the-air computing receiver. Subcommands:
//   simulate   run the sweep described by a config file (plus overrides)
//   reproduce  run a built-in scenario preset (fig2 | fig3)
//   trace      dump per-iteration detector diagnostics for one trial
// Exit codes: 0 success, 2 configuration error, 3 runtime error.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "icclink/config.hpp"

namespace {

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<double> snr_min_db;
    std::optional<double> snr_max_db;
    std::optional<double> snr_step_db;
    std::optional<unsigned> workers;
    std::optional<std::string> out;
    std::optional<std::string> variant;
    std::optional<std::string> scenario;
    std::optional<std::uint64_t> min_trials;
    std::optional<std::uint64_t> min_bit_errors;
    std::optional<std::uint64_t> max_trials;
    std::string dump_config;
};

void add_override_flags(CLI::App* cmd, Overrides& ov) {
    cmd->add_option("--seed", ov.seed, "Master seed for the run");
    cmd->add_option("--snr-min", ov.snr_min_db, "Lowest SNR point in dB");
    cmd->add_option("--snr-max", ov.snr_max_db, "Highest SNR point in dB");
    cmd->add_option("--snr-step", ov.snr_step_db, "SNR grid step in dB");
    cmd->add_option("--workers", ov.workers, "Worker threads (0 = hardware)");
    cmd->add_option("--out", ov.out, "Output CSV path");
    cmd->add_option("--variant", ov.variant,
                    "Restrict to one variant (joint-adaptive, joint-known-zero, genie-data, "
                    "genie-compute)");
    cmd->add_option("--scenario", ov.scenario, "Restrict to one NxK scenario, e.g. 10x2");
    cmd->add_option("--min-trials", ov.min_trials, "Minimum trials per sweep point");
    cmd->add_option("--min-bit-errors", ov.min_bit_errors, "Bit errors to stop at per point");
    cmd->add_option("--max-trials", ov.max_trials, "Trial cap per sweep point");
    cmd->add_option("--dump-config", ov.dump_config,
                    "Write the effective configuration to this path");
}

// Flags win over file values.
void apply_overrides(icc::RunConfig& cfg, const Overrides& ov) {
    if (ov.seed) cfg.master_seed = *ov.seed;
    if (ov.snr_min_db) cfg.snr_min_db = *ov.snr_min_db;
    if (ov.snr_max_db) cfg.snr_max_db = *ov.snr_max_db;
    if (ov.snr_step_db) cfg.snr_step_db = *ov.snr_step_db;
    if (ov.workers) cfg.workers = *ov.workers;
    if (ov.out) cfg.output_path = *ov.out;
    if (ov.min_trials) cfg.stopping.min_trials = *ov.min_trials;
    if (ov.min_bit_errors) cfg.stopping.min_bit_errors = *ov.min_bit_errors;
    if (ov.max_trials) cfg.stopping.max_trials = *ov.max_trials;
    if (ov.variant) {
        const auto v = icc::parse_variant(*ov.variant);
        if (!v) throw std::invalid_argument("unknown variant '" + *ov.variant + "'");
        cfg.variants = {*v};
    }
    if (ov.scenario) {
        const std::size_t pos = ov.scenario->find('x');
        if (pos == std::string::npos)
            throw std::invalid_argument("scenario must look like NxK, got '" + *ov.scenario +
                                        "'");
        cfg.scenario_antennas = {static_cast<std::size_t>(
            std::stoull(ov.scenario->substr(0, pos)))};
        cfg.scenario_users = {
            static_cast<std::size_t>(std::stoull(ov.scenario->substr(pos + 1)))};
    }
}

void print_summary(const icc::SweepReport& report) {
    std::printf("%-10s %-17s %8s %10s %12s %12s %12s\n", "scenario", "variant", "snr_db",
                "trials", "ber", "nmse", "nmse_cons");
    for (const icc::SweepPoint& p : report.points) {
        const double norm = static_cast<double>(p.n_users);
        std::printf("%-10s %-17s %8.1f %10llu %12.4e %12.4e %12.4e\n", p.scenario.c_str(),
                    std::string(icc::variant_name(p.variant)).c_str(), p.snr_db,
                    static_cast<unsigned long long>(p.trials), p.ber, p.nmse,
                    norm > 0.0 && p.mse > 0.0 ? p.mse_consensus / p.mse * p.nmse : 0.0);
    }
}

int run_config(icc::RunConfig cfg, const Overrides& ov) {
    apply_overrides(cfg, ov);
    cfg.validate();

    if (!ov.dump_config.empty()) {
        std::ofstream dump(ov.dump_config);
        if (!dump) throw std::runtime_error("cannot write config to " + ov.dump_config);
        icc::serialize_run_config(dump, cfg);
    }

    const auto scenarios = cfg.scenarios();
    const auto grid = cfg.snr_grid();
    const icc::SweepReport report = icc::run_sweep(scenarios, grid, cfg.system, cfg.stopping,
                                                   cfg.master_seed, cfg.workers);

    std::ofstream out(cfg.output_path);
    if (!out) throw std::runtime_error("cannot write CSV to " + cfg.output_path);
    icc::write_csv(out, report);
    out.close();

    print_summary(report);
    std::printf("wrote %zu rows to %s\n", report.points.size(), cfg.output_path.c_str());
    return 0;
}

int run_trace(const std::string& config_path, const Overrides& ov) {
    icc::RunConfig cfg = icc::parse_run_config_file(config_path);
    apply_overrides(cfg, ov);
    cfg.validate();

    icc::SystemConfig sys = cfg.system;
    if (!cfg.scenario_antennas.empty()) {
        sys.n_antennas = cfg.scenario_antennas.front();
        sys.n_users = cfg.scenario_users.front();
    }
    sys.validate();

    icc::RngStream rng(cfg.master_seed, 0);
    const icc::ChannelMatrix channel = icc::generate_channel(sys, rng);
    const icc::TransmitFrame frame = icc::generate_frame(sys, rng);
    const icc::CVector received = icc::transmit(sys, channel, frame, rng);
    icc::DetectorOptions opts;
    opts.collect_trace = true;
    const icc::DetectionResult res = icc::run_detector(sys, received, channel, opts);

    // Unlike simulate, the trace goes to stdout unless --out says otherwise.
    const std::string path = ov.out.value_or("-");
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (path != "-") {
        file.open(path);
        if (!file) throw std::runtime_error("cannot write trace to " + path);
        os = &file;
    }
    *os << "iteration,mean_data_var,mean_comp_var,comp_mean\n";
    std::ostringstream row;
    row.imbue(std::locale::classic());
    row << std::scientific;
    row.precision(5);
    for (const icc::IterationTrace& t : res.trace) {
        row.str("");
        row << t.iteration << ',' << t.mean_data_var << ',' << t.mean_comp_var << ','
            << t.comp_mean;
        *os << row.str() << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Link-level simulator for joint detection and over-the-air computing"};
    app.require_subcommand(1);

    std::string config_path;
    std::string figure;
    Overrides ov;

    CLI::App* simulate = app.add_subcommand("simulate", "Run the sweep from a config file");
    simulate->add_option("--config", config_path, "Path to the run configuration")->required();
    add_override_flags(simulate, ov);

    CLI::App* reproduce =
        app.add_subcommand("reproduce", "Run a built-in scenario preset (fig2 | fig3)");
    reproduce->add_option("figure", figure, "Preset name: fig2 or fig3")->required();
    add_override_flags(reproduce, ov);

    CLI::App* trace = app.add_subcommand("trace", "Per-iteration diagnostics for one trial");
    trace->add_option("--config", config_path, "Path to the run configuration")->required();
    add_override_flags(trace, ov);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (simulate->parsed()) return run_config(icc::parse_run_config_file(config_path), ov);
        if (reproduce->parsed()) {
            if (figure == "fig2") return run_config(icc::small_system_preset(), ov);
            if (figure == "fig3") return run_config(icc::massive_system_preset(), ov);
            throw std::invalid_argument("unknown preset '" + figure + "' (expected fig2 or fig3)");
        }
        if (trace->parsed()) return run_trace(config_path, ov);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
