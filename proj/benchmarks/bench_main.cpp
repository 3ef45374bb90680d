#include <benchmark/benchmark.h>

#include <random>

#include "acaforge/algebra.hpp"
#include "acaforge/circuits.hpp"
#include "acaforge/compilers.hpp"
#include "acaforge/engine.hpp"

using namespace acaforge;

namespace {

Configuration ring(std::int64_t w, int q, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<State> v(static_cast<std::size_t>(w));
    for (auto& s : v) s = static_cast<State>(rng() % static_cast<unsigned>(q));
    return Configuration(Background::periodic_1d(v));
}

}  // namespace

static void BM_WindowSweep(benchmark::State& state) {
    const auto w = state.range(0);
    auto r = RuleTable::wolfram(110);
    Window win(r, ring(w, 2, 1), Box::line(0, w), Boundary::periodic());
    auto cur = UpdateSchedule::synchronous().start(win.box());
    std::vector<std::size_t> D;
    for (auto _ : state) {
        cur.next(D);
        win.apply(D);
    }
    state.SetItemsProcessed(state.iterations() * w);
}
BENCHMARK(BM_WindowSweep)->Arg(256)->Arg(4096)->Arg(65536);

static void BM_FairRandomRun(benchmark::State& state) {
    auto r = RuleTable::wolfram(110);
    auto c0 = ring(512, 2, 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(run_schedule(r, c0, UpdateSchedule::fair_random(3, 0, 0.1), 200,
                                              Domain{Box::line(0, 512), Boundary::periodic()}));
}
BENCHMARK(BM_FairRandomRun)->Unit(benchmark::kMillisecond);

static void BM_CommutativityCheck(benchmark::State& state) {
    auto host = compile_marching_soldiers(RuleTable::wolfram(150)).host;
    for (auto _ : state) benchmark::DoNotOptimize(check_commutativity(host));
}
BENCHMARK(BM_CommutativityCheck)->Unit(benchmark::kMicrosecond);

static void BM_VerifyShiftingMV(benchmark::State& state) {
    auto guest = RuleTable::wolfram(110);
    auto c = compile_shifting_mv(guest);
    auto g0 = ring(64, 2, 4);
    for (auto _ : state)
        benchmark::DoNotOptimize(verify_invariant_simulation(guest, c, g0, Box::line(0, 64),
                                                             {UpdateSchedule::fair_random(5)}, 20));
}
BENCHMARK(BM_VerifyShiftingMV)->Unit(benchmark::kMillisecond);

static void BM_PlaceNand(benchmark::State& state) {
    auto n = build_nand_netlist();
    for (auto _ : state) benchmark::DoNotOptimize(place_and_route(n));
}
BENCHMARK(BM_PlaceNand)->Unit(benchmark::kMillisecond);

static void BM_NandActivePolicy(benchmark::State& state) {
    auto p = place_and_route(build_nand_netlist());
    const bool engine = state.range(0) != 0;
    for (auto _ : state) {
        auto run = engine ? run_tracks_engine(p, {true, false, true, false}, UpdateSchedule::fair_random(7))
                          : run_tracks(p, {true, false, true, false}, ActivePolicy::fair_random(7));
        benchmark::DoNotOptimize(run);
    }
    state.SetLabel(engine ? "engine" : "active-set");
}
BENCHMARK(BM_NandActivePolicy)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_Rule110StepCircuit(benchmark::State& state) {
    auto p = place_and_route(build_rule_step_circuit(RuleTable::wolfram(110)));
    auto pol = standard_policies(0);
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_circuit(p, {true, true, false}, pol));
}
BENCHMARK(BM_Rule110StepCircuit)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
