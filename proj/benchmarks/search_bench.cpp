// Microbenchmarks for the pieces that dominate a falsification run: deviation
// distances, candidate enumeration, single simulations, and a small end-to-end
// search.  Build with -DHAZSEARCH_BUILD_BENCHMARKS=ON and run the binary.

#include <string>

#include <benchmark/benchmark.h>

#include "hazsearch/distance.hpp"
#include "hazsearch/search.hpp"
#include "hazsearch/workcell.hpp"
#include "hazsearch/workflow.hpp"

using namespace hazsearch;

namespace {

const ParameterVector kNominalTheta = {1.2, 0.0, 0.3};

void deviation_distance_single_pair(benchmark::State& state) {
    const std::string alphabet = "tpwd";
    for (auto _ : state) {
        benchmark::DoNotOptimize(error_distance("tpwtdw", "wwwwww", alphabet));
    }
}
BENCHMARK(deviation_distance_single_pair);

void deviation_distances_full_space(benchmark::State& state) {
    // one source against every feasible sequence, as the search engine does it
    const WorkcellConfig cell = reference_workcell_config();
    CandidateSet set = generate_feasible(cell.fsm, 6);
    std::vector<std::string> targets;
    for (const auto& e : set.entries) targets.push_back(e.sequence);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            distances_from(cell.nominal_sequence, targets, cell.fsm.alphabet));
    }
}
BENCHMARK(deviation_distances_full_space);

void enumerate_and_order_candidates(benchmark::State& state) {
    const WorkcellConfig cell = reference_workcell_config();
    for (auto _ : state) {
        CandidateSet set = generate_feasible(cell.fsm, 6);
        sort_by_distance(set, cell.nominal_sequence, cell.fsm.alphabet);
        benchmark::DoNotOptimize(set.entries.size());
    }
}
BENCHMARK(enumerate_and_order_candidates);

void simulate_nominal_behavior(benchmark::State& state) {
    const ReferenceWorkcell sim(reference_workcell_config());
    const Behavior b{"tpwtdw", kNominalTheta};
    for (auto _ : state) {
        benchmark::DoNotOptimize(sim.simulate(b).peak.value);
    }
}
BENCHMARK(simulate_nominal_behavior);

void simulate_colliding_behavior(benchmark::State& state) {
    // one omitted walk: the worker meets the vehicle in the corridor
    const ReferenceWorkcell sim(reference_workcell_config());
    const Behavior b{"tptdww", kNominalTheta};
    for (auto _ : state) {
        benchmark::DoNotOptimize(sim.simulate(b).peak.value);
    }
}
BENCHMARK(simulate_colliding_behavior);

void strict_search_small_budget(benchmark::State& state) {
    const WorkcellConfig cell = reference_workcell_config();
    SearchConfig cfg;
    cfg.n_max = 60;
    cfg.alpha = 0.6;
    cfg.n_nmo = 8;
    cfg.seed = 1;
    for (auto _ : state) {
        const ReferenceWorkcell sim(cell, cfg.risk);
        benchmark::DoNotOptimize(run_search(cfg, sim, cell.fsm).totals.n_f);
    }
}
BENCHMARK(strict_search_small_budget);

} // namespace

BENCHMARK_MAIN();
