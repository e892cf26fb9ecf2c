#include <benchmark/benchmark.h>

#include <cstdint>

#include "icclink/detector.hpp"

namespace {

using namespace icc;

struct BenchInstance {
    SystemConfig cfg;
    ChannelMatrix channel;
    CVector received;
};

BenchInstance make_instance(std::size_t n, std::size_t k, int iterations) {
    SystemConfig cfg;
    cfg.n_antennas = n;
    cfg.n_users = k;
    cfg.iterations = iterations;
    cfg.noise_variance = 0.1;
    RngStream rng(1, n * 1000 + k);
    BenchInstance inst{cfg, generate_channel(cfg, rng), {}};
    const TransmitFrame frame = generate_frame(cfg, rng);
    inst.received = transmit(cfg, inst.channel, frame, rng);
    return inst;
}

void BM_DetectorRun(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const BenchInstance inst = make_instance(n, n, 30);
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_detector(inst.cfg, inst.received, inst.channel));
    }
    state.SetComplexityN(static_cast<std::int64_t>(n * n));
}

void BM_DetectorIteration(benchmark::State& state) {
    // One message-passing round: cancellation, beliefs, both denoisers.
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const BenchInstance inst = make_instance(n, n, 1);
    GabpState gabp = init_state(inst.cfg);
    SicGrids sic;
    BeliefGrids beliefs;
    CMatrix data_est;
    RMatrix data_var, comp_est, comp_var;
    for (auto _ : state) {
        soft_interference_cancellation(inst.received, inst.channel, gabp,
                                       inst.cfg.noise_variance, sic);
        generate_beliefs(sic, inst.channel, beliefs);
        denoise_data(beliefs, inst.cfg.data_power, data_est);
        damp(gabp.data_est, data_est, inst.cfg.damping_data);
        data_replica_variance(gabp.data_est, inst.cfg.data_power, data_var);
        damp(gabp.data_var, data_var, inst.cfg.damping_data);
        denoise_compute(beliefs, inst.cfg.compute_variance, gabp.comp_mean, comp_est, comp_var);
        damp(gabp.comp_est, comp_est, inst.cfg.damping_compute);
        damp(gabp.comp_var, comp_var, inst.cfg.damping_compute);
        benchmark::DoNotOptimize(sic.data_obs.data());
    }
    state.SetComplexityN(static_cast<std::int64_t>(n * n));
}

BENCHMARK(BM_DetectorRun)->Arg(25)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DetectorIteration)
    ->Arg(25)
    ->Arg(50)
    ->Arg(100)
    ->Arg(200)
    ->Unit(benchmark::kMicrosecond)
    ->Complexity(benchmark::oN);

}  // namespace

BENCHMARK_MAIN();
