// Programmatic benchmark sweep: generate small-world scenarios over a grid of
// sizes and degrees, run two Shapley engines on each, and print the CSV.
// The same sweep can be run from the command line:
//   ffcg bench --config demos/small_world_sweep.json

#include <iostream>

#include "lcg/bench.hpp"

using namespace lcg;

int main() {
    SweepConfig sweep;
    sweep.base.kind = ScenarioConfig::Kind::small_world;
    sweep.base.rewire_prob = 0.2;
    sweep.sizes = {10, 15, 20};
    sweep.degrees = {2, 4};
    sweep.seeds = {1, 2, 3};
    sweep.methods = {"fs_lcg", "baseline"};

    // Rows run on a worker pool but come back in config order. elapsed_s
    // varies run to run; every other column is reproducible.
    const auto rows = run_sweep(sweep, /*jobs=*/0);
    write_csv(std::cout, rows);
    return 0;
}
