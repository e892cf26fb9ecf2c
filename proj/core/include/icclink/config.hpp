#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "icclink/harness.hpp"

namespace icc {

/// Everything one simulation run needs: base system parameters, the
/// scenario list, the SNR grid, the stopping rule and bookkeeping. Read
/// from a flat "key = value" text file; see serialize_run_config for the
/// schema.
struct RunConfig {
    SystemConfig system;  // n_antennas/n_users act as defaults for scenarios
    std::vector<std::size_t> scenario_antennas;  // parallel to scenario_users
    std::vector<std::size_t> scenario_users;
    std::vector<Variant> variants = {Variant::JointAdaptive};
    double snr_min_db = 0.0;
    double snr_max_db = 32.0;
    double snr_step_db = 4.0;
    StoppingRule stopping;
    unsigned workers = 0;
    std::uint64_t master_seed = 1;
    std::string output_path = "sweep.csv";

    std::vector<double> snr_grid() const;
    /// Cross product of the (N, K) list with the variant list.
    std::vector<Scenario> scenarios() const;
    /// Throws std::invalid_argument naming the violated constraint.
    void validate() const;
};

/// Parses the flat key = value format ('#' starts a comment). Unknown keys
/// and malformed values throw std::invalid_argument.
RunConfig parse_run_config(std::istream& in);
RunConfig parse_run_config_file(const std::string& path);

/// Writes every key in canonical order; parsing the output reproduces the
/// config exactly.
void serialize_run_config(std::ostream& os, const RunConfig& cfg);

/// Built-in presets: N = 10 with K in {2, 5, 10}, and N = 200 with
/// K in {50, 100, 200}, each over all four variants with the default
/// parameter set (99%/1% power split, damping 0.5/0.8, 30 iterations).
RunConfig small_system_preset();    // "fig2"
RunConfig massive_system_preset();  // "fig3"

}  // namespace icc
