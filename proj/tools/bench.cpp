// Serial vs parallel benchmark for the grid solver and the Monte-Carlo
// estimator.  Also asserts both modes return bit-identical results, which is
// the contract the tests rely on.
//
// Usage: takeover_bench [horizon] [grid_points] [mc_samples]

#include "takeover/grid.hpp"
#include "takeover/sim.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace takeover;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ScalarSpec make_spec(int horizon) {
    // Six-node ring with two chords; costs and factors from a fixed stream.
    const int nodes = 6;
    std::vector<std::pair<int, int>> edges;
    for (int v = 0; v < nodes; ++v) {
        edges.emplace_back(v, (v + 1) % nodes);
        edges.emplace_back((v + 1) % nodes, v);
    }
    edges.emplace_back(0, 3);
    edges.emplace_back(2, 5);

    Rng rng(20240817);
    auto row = [&](double lo, double hi) {
        std::vector<double> r(nodes);
        for (double& x : r) x = lo + (hi - lo) * rng.next_double();
        return r;
    };
    ScalarSpec s;
    s.graph = make_graph(nodes, edges);
    s.horizon = horizon;
    for (int t = 0; t < horizon; ++t) {
        s.f.push_back(row(0.9, 1.1));
        s.d.push_back(row(0.0, 0.6));
        s.a.push_back(row(0.0, 0.6));
    }
    for (int t = 0; t <= horizon; ++t) s.g.push_back(row(0.2, 1.5));
    return s;
}

bool same_tables(const GridTable& x, const GridTable& y) {
    return x.value == y.value && x.policy_defender == y.policy_defender &&
           x.policy_adversary == y.policy_adversary;
}

}  // namespace

int main(int argc, char** argv) {
    const int horizon = argc > 1 ? std::atoi(argv[1]) : 32;
    const int grid_points = argc > 2 ? std::atoi(argv[2]) : 257;
    const long mc_samples = argc > 3 ? std::atol(argv[3]) : 1000000;

#ifdef _OPENMP
    std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
    std::printf("openmp threads: built without OpenMP\n");
#endif

    ScalarSpec spec = make_spec(horizon);
    std::vector<double> grid(grid_points);
    for (int i = 0; i < grid_points; ++i) grid[i] = 0.01 * std::pow(10000.0, i / (grid_points - 1.0));
    GridSpec gspec = embed_snapped(spec, grid);

    std::printf("grid solve: horizon %d, %d nodes, %d grid points (%ld cells/stage)\n", horizon,
                spec.graph.node_count, grid_points, (long)spec.graph.node_count * grid_points);

    auto t0 = std::chrono::steady_clock::now();
    GridTable serial = solve(gspec, RunMode::serial);
    double serial_s = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    GridTable parallel = solve(gspec, RunMode::parallel);
    double parallel_s = seconds_since(t0);

    std::printf("  serial   %8.3f s\n  parallel %8.3f s  (speedup %.2fx)\n", serial_s, parallel_s,
                serial_s / parallel_s);
    if (!same_tables(serial, parallel)) {
        std::printf("  MISMATCH: serial and parallel tables differ\n");
        return 1;
    }
    std::printf("  tables bit-identical: yes\n");

    ScalarProblem prob = lower(spec);
    ScalarTable solved = solve_lp(prob);

    std::printf("monte carlo: %ld rollouts of %d stages\n", mc_samples, horizon);
    t0 = std::chrono::steady_clock::now();
    Estimate es = estimate_expected_cost(prob, solved, 1.0, 0, mc_samples, 7, RunMode::serial);
    serial_s = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    Estimate ep = estimate_expected_cost(prob, solved, 1.0, 0, mc_samples, 7, RunMode::parallel);
    parallel_s = seconds_since(t0);

    std::printf("  serial   %8.3f s\n  parallel %8.3f s  (speedup %.2fx)\n", serial_s, parallel_s,
                serial_s / parallel_s);
    if (es.mean != ep.mean || es.std_error != ep.std_error) {
        std::printf("  MISMATCH: serial and parallel estimates differ\n");
        return 1;
    }
    std::printf("  estimates bit-identical: yes (mean %.12g, solver value %.12g)\n", es.mean,
                solved.p[0][0]);
    return 0;
}
