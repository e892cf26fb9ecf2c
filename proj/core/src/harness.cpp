#include "icclink/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <sstream>
#include <thread>

namespace icc {

namespace {

// Stopping is evaluated at these boundaries regardless of the worker count,
// so a sweep point always runs a deterministic number of trials.
constexpr std::uint64_t kTrialBatch = 512;

std::uint64_t trial_stream_id(std::uint32_t point_index, std::uint64_t trial_index) {
    return (static_cast<std::uint64_t>(point_index) << 32) | trial_index;
}

void run_trial_range(const SystemConfig& cfg, Variant variant, std::uint64_t master_seed,
                     std::uint32_t point_index, std::uint64_t first, std::uint64_t last,
                     std::span<TrialMetrics> slots, unsigned workers) {
    if (workers <= 1 || last - first <= 1) {
        for (std::uint64_t t = first; t < last; ++t)
            slots[t - first] = run_trial(cfg, variant,
                                         RngStream(master_seed, trial_stream_id(point_index, t)));
        return;
    }
    std::atomic<std::uint64_t> next{first};
    auto worker = [&]() {
        while (true) {
            const std::uint64_t t = next.fetch_add(1, std::memory_order_relaxed);
            if (t >= last) break;
            slots[t - first] =
                run_trial(cfg, variant, RngStream(master_seed, trial_stream_id(point_index, t)));
        }
    };
    const unsigned n_threads =
        static_cast<unsigned>(std::min<std::uint64_t>(workers, last - first));
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

std::string format_sci(double value) {
    std::ostringstream oss;
    oss.imbue(std::locale::classic());
    oss << std::scientific;
    oss.precision(5);  // 6 significant digits
    oss << value;
    return oss.str();
}

}  // namespace

std::string_view variant_name(Variant v) {
    switch (v) {
        case Variant::JointAdaptive: return "joint-adaptive";
        case Variant::JointKnownZero: return "joint-known-zero";
        case Variant::GenieData: return "genie-data";
        case Variant::GenieCompute: return "genie-compute";
    }
    return "unknown";
}

std::optional<Variant> parse_variant(std::string_view name) {
    if (name == "joint-adaptive") return Variant::JointAdaptive;
    if (name == "joint-known-zero") return Variant::JointKnownZero;
    if (name == "genie-data") return Variant::GenieData;
    if (name == "genie-compute") return Variant::GenieCompute;
    return std::nullopt;
}

double noise_variance_for_snr_db(double snr_db) {
    return std::pow(10.0, -snr_db / 10.0);
}

SystemConfig scenario_config(const SystemConfig& base, const Scenario& scenario, double snr_db) {
    SystemConfig cfg = base;
    cfg.n_antennas = scenario.n_antennas;
    cfg.n_users = scenario.n_users;
    cfg.noise_variance = noise_variance_for_snr_db(snr_db);
    cfg.mean_mode =
        scenario.variant == Variant::JointAdaptive ? MeanMode::Adaptive : MeanMode::KnownZero;
    return cfg;
}

TrialMetrics run_trial(const SystemConfig& cfg, Variant variant, RngStream rng) {
    const ChannelMatrix channel = generate_channel(cfg, rng);
    const TransmitFrame frame = generate_frame(cfg, rng);
    const CVector received = transmit(cfg, channel, frame, rng);
    const double f_true = sum_target(frame.compute);

    TrialMetrics m;
    m.target_sq = f_true * f_true;

    switch (variant) {
        case Variant::JointAdaptive:
        case Variant::JointKnownZero: {
            const DetectionResult res = run_detector(cfg, received, channel);
            const auto [errors, bits] = count_bit_errors(frame.bits, res.data_symbols);
            m.bit_errors = errors;
            m.bits = bits;
            const CVector weights = compute_combiner(channel, cfg.compute_variance,
                                                     cfg.noise_variance, res.data_mse);
            // The combiner is derived for zero-mean computing signals, so the
            // residual is recentred before combining: by the live mean
            // estimate when the mean is being tracked, by the trusted model
            // mean otherwise.
            const double mean_correction =
                cfg.mean_mode == MeanMode::Adaptive ? res.comp_mean : cfg.compute_mean;
            const double f_hat =
                apply_combiner(weights, received, channel, res.data_symbols, mean_correction);
            m.sq_error = (f_true - f_hat) * (f_true - f_hat);
            const double f_consensus = sum_target(res.comp_signals);
            m.sq_error_consensus = (f_true - f_consensus) * (f_true - f_consensus);
            break;
        }
        case Variant::GenieData: {
            const DetectionResult res = genie_data_detection(cfg, received, channel, frame.compute);
            const auto [errors, bits] = count_bit_errors(frame.bits, res.data_symbols);
            m.bit_errors = errors;
            m.bits = bits;
            // The function estimate is still produced the regular way so the
            // report row is complete, even though the bound targets BER.
            const CVector weights = compute_combiner(channel, cfg.compute_variance,
                                                     cfg.noise_variance, res.data_mse);
            const double f_hat = apply_combiner(weights, received, channel, res.data_symbols, 0.0);
            m.sq_error = (f_true - f_hat) * (f_true - f_hat);
            const double f_consensus = sum_target(res.comp_signals);
            m.sq_error_consensus = (f_true - f_consensus) * (f_true - f_consensus);
            break;
        }
        case Variant::GenieCompute: {
            const double f_hat = genie_compute_estimate(cfg, received, channel, frame.data);
            m.sq_error = (f_true - f_hat) * (f_true - f_hat);
            m.sq_error_consensus = m.sq_error;
            break;
        }
    }
    return m;
}

SweepReport run_sweep(std::span<const Scenario> scenarios, std::span<const double> snr_grid_db,
                      const SystemConfig& base, const StoppingRule& stopping,
                      std::uint64_t master_seed, unsigned workers) {
    if (snr_grid_db.empty()) throw std::invalid_argument("run_sweep: empty SNR grid");
    if (scenarios.empty()) throw std::invalid_argument("run_sweep: no scenarios");
    if (workers == 0) {
        workers = std::thread::hardware_concurrency();
        if (workers == 0) workers = 1;
    }

    SweepReport report;
    report.master_seed = master_seed;
    std::uint32_t point_index = 0;
    std::vector<TrialMetrics> slots;

    for (const Scenario& scenario : scenarios) {
        for (double snr_db : snr_grid_db) {
            const SystemConfig cfg = scenario_config(base, scenario, snr_db);
            cfg.validate();

            const bool counts_bits = scenario.variant != Variant::GenieCompute;
            const std::uint64_t trial_budget =
                counts_bits ? stopping.max_trials
                            : std::clamp<std::uint64_t>(stopping.min_trials, 1, stopping.max_trials);

            TrialMetrics total;
            std::uint64_t trials_done = 0;
            while (trials_done < trial_budget) {
                const std::uint64_t batch = std::min(kTrialBatch, trial_budget - trials_done);
                slots.assign(batch, TrialMetrics{});
                run_trial_range(cfg, scenario.variant, master_seed, point_index, trials_done,
                                trials_done + batch, slots, workers);
                for (const TrialMetrics& m : slots) total += m;
                trials_done += batch;
                if (counts_bits && total.bit_errors >= stopping.min_bit_errors &&
                    trials_done >= stopping.min_trials)
                    break;
            }

            SweepPoint point;
            point.scenario = scenario.name;
            point.variant = scenario.variant;
            point.n_antennas = scenario.n_antennas;
            point.n_users = scenario.n_users;
            point.snr_db = snr_db;
            point.trials = trials_done;
            point.bits = total.bits;
            point.bit_errors = total.bit_errors;
            point.ber = total.bits ? static_cast<double>(total.bit_errors) /
                                         static_cast<double>(total.bits)
                                   : 0.0;
            point.ber_ci95 = wilson_halfwidth(total.bit_errors, total.bits);
            const double trials_f = static_cast<double>(trials_done);
            point.mse = trials_done ? total.sq_error / trials_f : 0.0;
            point.mse_consensus = trials_done ? total.sq_error_consensus / trials_f : 0.0;
            const double normalizer =
                static_cast<double>(cfg.n_users) * cfg.compute_variance;
            point.nmse = normalizer > 0.0 ? point.mse / normalizer : 0.0;
            point.seed = master_seed;
            report.points.push_back(std::move(point));
            ++point_index;
        }
    }
    return report;
}

void write_csv(std::ostream& os, const SweepReport& report) {
    os << "scenario,variant,N,K,snr_db,trials,bits,bit_errors,ber,ber_ci95,mse,nmse,seed\n";
    for (const SweepPoint& p : report.points) {
        os << p.scenario << ',' << variant_name(p.variant) << ',' << p.n_antennas << ','
           << p.n_users << ',' << format_sci(p.snr_db) << ',' << p.trials << ',' << p.bits << ','
           << p.bit_errors << ',' << format_sci(p.ber) << ',' << format_sci(p.ber_ci95) << ','
           << format_sci(p.mse) << ',' << format_sci(p.nmse) << ',' << p.seed << '\n';
    }
}

}  // namespace icc
