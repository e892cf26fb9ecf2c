#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "icclink/metrics.hpp"

namespace icc {

/// What the receiver is allowed to know in a run.
enum class Variant {
    JointAdaptive,   // joint detection, computing-signal mean estimated
    JointKnownZero,  // joint detection, computing-signal mean fixed at zero
    GenieData,       // computing signals revealed, data detected (BER bound)
    GenieCompute,    // data symbols revealed, function combined (NMSE bound)
};

std::string_view variant_name(Variant v);
std::optional<Variant> parse_variant(std::string_view name);

struct Scenario {
    std::string name;  // e.g. "N10K2"
    std::size_t n_antennas = 10;
    std::size_t n_users = 2;
    Variant variant = Variant::JointAdaptive;
};

/// A sweep point stops once min_bit_errors have been seen (but never before
/// min_trials) or at max_trials, whichever comes first. Variants that
/// produce no bits (GenieCompute) run exactly
/// clamp(min_trials, 1, max_trials) trials.
struct StoppingRule {
    std::uint64_t min_trials = 1000;
    std::uint64_t min_bit_errors = 100;
    std::uint64_t max_trials = 200000;
};

/// Aggregated results for one (scenario, SNR) point.
struct SweepPoint {
    std::string scenario;
    Variant variant = Variant::JointAdaptive;
    std::size_t n_antennas = 0;
    std::size_t n_users = 0;
    double snr_db = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t bits = 0;
    std::uint64_t bit_errors = 0;
    double ber = 0.0;
    double ber_ci95 = 0.0;
    double mse = 0.0;
    double nmse = 0.0;
    double mse_consensus = 0.0;  // consensus-path companion to mse
    std::uint64_t seed = 0;
};

struct SweepReport {
    std::vector<SweepPoint> points;
    std::uint64_t master_seed = 0;
};

/// Transmit power is normalized to 1, so SNR in dB maps to a noise variance
/// of 10^(-snr_db / 10).
double noise_variance_for_snr_db(double snr_db);

/// Base config specialized to one scenario and SNR point; the mean mode
/// follows the variant.
SystemConfig scenario_config(const SystemConfig& base, const Scenario& scenario, double snr_db);

/// One channel realization, frame, detection/combining pass and metric
/// evaluation. Deterministic given the stream.
TrialMetrics run_trial(const SystemConfig& cfg, Variant variant, RngStream rng);

/// Monte-Carlo sweep over scenarios x SNR grid. The report depends only on
/// the inputs and master_seed, never on the worker count: trials draw their
/// randomness from per-trial streams and are reduced in trial order, and
/// stopping is evaluated at fixed batch boundaries. workers == 0 picks the
/// hardware concurrency.
SweepReport run_sweep(std::span<const Scenario> scenarios, std::span<const double> snr_grid_db,
                      const SystemConfig& base, const StoppingRule& stopping,
                      std::uint64_t master_seed, unsigned workers = 0);

/// Plot-ready CSV, one row per point:
/// scenario,variant,N,K,snr_db,trials,bits,bit_errors,ber,ber_ci95,mse,nmse,seed
/// Floats use scientific notation with 6 significant digits.
void write_csv(std::ostream& os, const SweepReport& report);

}  // namespace icc
