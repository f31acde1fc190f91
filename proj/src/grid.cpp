#include "takeover/grid.hpp"

#include "takeover/errors.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>
#include <utility>
#include <vector>

namespace takeover {

namespace {

void check_cost_block(std::vector<std::string>& issues, const std::vector<std::vector<std::vector<double>>>& c,
                      const char* name, int rows, int nodes, int grid) {
    if ((int)c.size() != rows) {
        issues.push_back(std::string(name) + ": expected " + std::to_string(rows) + " stage rows, got " +
                         std::to_string(c.size()));
        return;
    }
    for (int t = 0; t < rows; ++t) {
        if ((int)c[t].size() != nodes) {
            issues.push_back(std::string(name) + "[" + std::to_string(t) + "]: expected " + std::to_string(nodes) +
                             " node entries, got " + std::to_string(c[t].size()));
            continue;
        }
        for (int v = 0; v < nodes; ++v) {
            if ((int)c[t][v].size() != grid) {
                issues.push_back(std::string(name) + "[" + std::to_string(t) + "][" + std::to_string(v) +
                                 "]: expected " + std::to_string(grid) + " grid entries, got " +
                                 std::to_string(c[t][v].size()));
                continue;
            }
            for (int x = 0; x < grid; ++x) {
                double val = c[t][v][x];
                if (!std::isfinite(val))
                    issues.push_back(std::string(name) + "[" + std::to_string(t) + "][" + std::to_string(v) + "][" +
                                     std::to_string(x) + "]: must be finite");
                else if (val < 0.0)
                    issues.push_back(std::string(name) + "[" + std::to_string(t) + "][" + std::to_string(v) + "][" +
                                     std::to_string(x) + "]: costs must be nonnegative, got " + std::to_string(val));
            }
        }
    }
}

}  // namespace

void validate(const GridSpec& s) {
    std::vector<std::string> issues;
    const int nodes = s.graph.node_count;
    const int grid = (int)s.grid.size();
    if (nodes < 1) issues.push_back("graph: game has no nodes");
    if (s.horizon < 1) issues.push_back("horizon: must be at least 1, got " + std::to_string(s.horizon));
    if (grid < 1) issues.push_back("state_grid: must hold at least one point");
    for (int i = 0; i < grid; ++i) {
        if (!std::isfinite(s.grid[i])) issues.push_back("state_grid[" + std::to_string(i) + "]: must be finite");
        if (i > 0 && !(s.grid[i] > s.grid[i - 1]))
            issues.push_back("state_grid[" + std::to_string(i) + "]: grid points must be strictly increasing");
    }
    if (!issues.empty()) throw SpecError(issues);

    if ((int)s.dynamics.size() != s.horizon) {
        issues.push_back("dynamics: expected " + std::to_string(s.horizon) + " stage rows, got " +
                         std::to_string(s.dynamics.size()));
    } else {
        for (int t = 0; t < s.horizon; ++t) {
            if ((int)s.dynamics[t].size() != nodes) {
                issues.push_back("dynamics[" + std::to_string(t) + "]: expected " + std::to_string(nodes) +
                                 " node maps, got " + std::to_string(s.dynamics[t].size()));
                continue;
            }
            for (int v = 0; v < nodes; ++v) {
                if ((int)s.dynamics[t][v].size() != grid) {
                    issues.push_back("dynamics[" + std::to_string(t) + "][" + std::to_string(v) + "]: expected " +
                                     std::to_string(grid) + " grid entries, got " +
                                     std::to_string(s.dynamics[t][v].size()));
                    continue;
                }
                for (int x = 0; x < grid; ++x) {
                    int to = s.dynamics[t][v][x];
                    if (to < 0 || to >= grid)
                        issues.push_back("dynamics[" + std::to_string(t) + "][" + std::to_string(v) + "][" +
                                         std::to_string(x) + "]: maps to grid index " + std::to_string(to) +
                                         ", outside 0.." + std::to_string(grid - 1));
                }
            }
        }
    }

    check_cost_block(issues, s.g, "costs.g", s.horizon + 1, nodes, grid);
    check_cost_block(issues, s.d, "costs.d", s.horizon, nodes, grid);
    check_cost_block(issues, s.a, "costs.a", s.horizon, nodes, grid);
    if (!issues.empty()) throw SpecError(issues);
}

GameMatrix cost_to_go(const GridSpec& s, const GameForm& form, int t, int node, int xi,
                      const std::vector<std::vector<double>>& value_next) {
    const NodeGame& ng = form.nodes[node];
    const int rows = (int)ng.defender.size();
    const int cols = (int)ng.adversary.size();
    GameMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        double dd = ng.defender[i].cost_node < 0 ? 0.0 : s.d[t][ng.defender[i].cost_node][xi];
        for (int j = 0; j < cols; ++j) {
            double aa = ng.adversary[j].cost_node < 0 ? 0.0 : s.a[t][ng.adversary[j].cost_node][xi];
            int nx = ng.next_at(i, j);
            m.at(i, j) = value_next[nx][s.dynamics[t][nx][xi]] + dd - aa;
        }
    }
    return m;
}

GridTable solve(const GridSpec& s, RunMode mode) {
    validate(s);
    const GameForm form = game_form(s.graph);
    const int nodes = s.graph.node_count;
    const int grid = (int)s.grid.size();
    const int L = s.horizon;

    GridTable out;
    out.value.assign(L + 1, std::vector<std::vector<double>>(nodes, std::vector<double>(grid, 0.0)));
    out.value[L] = s.g[L];  // terminal values pass through untouched
    out.policy_defender.assign(
        L, std::vector<std::vector<std::vector<double>>>(nodes, std::vector<std::vector<double>>(grid)));
    out.policy_adversary.assign(
        L, std::vector<std::vector<std::vector<double>>>(nodes, std::vector<std::vector<double>>(grid)));

    for (int t = L - 1; t >= 0; --t) {
        const std::vector<std::vector<double>>& vnext = out.value[t + 1];
        std::exception_ptr failure = nullptr;

        // Every (node, grid) cell of a stage depends only on the next
        // stage's table, so the cells can be solved in any order (or
        // concurrently) with bit-identical results.
        const long cells = (long)nodes * grid;
        bool parallel = mode == RunMode::parallel;
#pragma omp parallel for schedule(static) if (parallel)
        for (long cell = 0; cell < cells; ++cell) {
            const int v = (int)(cell / grid);
            const int x = (int)(cell % grid);
            try {
                GameMatrix m = cost_to_go(s, form, t, v, x, vnext);
                GameSolution sol = solve_zero_sum(m);
                out.value[t][v][x] = s.g[t][v][x] + sol.value;
                out.policy_defender[t][v][x] = std::move(sol.row_strategy);
                out.policy_adversary[t][v][x] = std::move(sol.col_strategy);
            } catch (...) {
#pragma omp critical
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);
    }
    return out;
}

double value_at(const GridTable& t, int stage, int node, int xi) {
    if (stage < 0 || stage >= (int)t.value.size()) throw SpecError("value_at: stage out of range");
    if (node < 0 || node >= (int)t.value[stage].size()) throw SpecError("value_at: node out of range");
    if (xi < 0 || xi >= (int)t.value[stage][node].size()) throw SpecError("value_at: grid index out of range");
    return t.value[stage][node][xi];
}

namespace {

GridSpec tabulate(const ScalarSpec& s, std::vector<double> grid,
                  std::vector<std::vector<std::vector<int>>> dynamics) {
    GridSpec out;
    out.graph = s.graph;
    out.horizon = s.horizon;
    out.grid = std::move(grid);
    out.dynamics = std::move(dynamics);
    const int nodes = s.graph.node_count;
    const int n = (int)out.grid.size();

    auto tab = [&](const Table& c, int rows) {
        std::vector<std::vector<std::vector<double>>> block(
            rows, std::vector<std::vector<double>>(nodes, std::vector<double>(n, 0.0)));
        for (int t = 0; t < rows; ++t)
            for (int v = 0; v < nodes; ++v)
                for (int x = 0; x < n; ++x) block[t][v][x] = c[t][v] * out.grid[x] * out.grid[x];
        return block;
    };
    out.g = tab(s.g, s.horizon + 1);
    out.d = tab(s.d, s.horizon);
    out.a = tab(s.a, s.horizon);
    return out;
}

}  // namespace

GridSpec embed_power_of_two(const ScalarSpec& s) {
    const ScalarProblem prob = lower(s);  // validates shapes and signs
    const int nodes = s.graph.node_count;
    const int J = s.horizon + 1;
    const int n = 2 * J + 1;

    std::vector<std::string> issues;
    std::vector<std::vector<int>> shift(s.horizon, std::vector<int>(nodes, 0));
    for (int t = 0; t < s.horizon; ++t) {
        for (int v = 0; v < nodes; ++v) {
            double f = s.f[t][v];
            int e = 0;
            double mant = std::frexp(f, &e);
            if (!(f > 0.0) || mant != 0.5)
                issues.push_back("dynamics.f[" + std::to_string(t) + "][" + std::to_string(v) +
                                 "]: exact grid embedding needs a positive power of two, got " + std::to_string(f));
            else
                shift[t][v] = e - 1;
        }
    }
    if (!issues.empty()) throw SpecError(issues);

    std::vector<double> grid(n);
    for (int i = 0; i < n; ++i) grid[i] = std::ldexp(1.0, i - J);

    std::vector<std::vector<std::vector<int>>> dynamics(
        s.horizon, std::vector<std::vector<int>>(nodes, std::vector<int>(n, 0)));
    for (int t = 0; t < s.horizon; ++t)
        for (int v = 0; v < nodes; ++v)
            for (int x = 0; x < n; ++x) dynamics[t][v][x] = std::clamp(x + shift[t][v], 0, n - 1);

    (void)prob;
    return tabulate(s, std::move(grid), std::move(dynamics));
}

GridSpec embed_snapped(const ScalarSpec& s, std::vector<double> grid) {
    const ScalarProblem prob = lower(s);  // validates shapes and signs
    (void)prob;
    std::vector<std::string> issues;
    if (grid.empty()) issues.push_back("state_grid: must hold at least one point");
    for (size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            issues.push_back("state_grid[" + std::to_string(i) + "]: grid points must be strictly increasing");
    if (!issues.empty()) throw SpecError(issues);

    const int nodes = s.graph.node_count;
    const int n = (int)grid.size();
    auto nearest = [&](double x) {
        auto it = std::lower_bound(grid.begin(), grid.end(), x);
        if (it == grid.begin()) return 0;
        if (it == grid.end()) return n - 1;
        int hi = (int)(it - grid.begin());
        return (x - grid[hi - 1] <= grid[hi] - x) ? hi - 1 : hi;
    };

    std::vector<std::vector<std::vector<int>>> dynamics(
        s.horizon, std::vector<std::vector<int>>(nodes, std::vector<int>(n, 0)));
    for (int t = 0; t < s.horizon; ++t)
        for (int v = 0; v < nodes; ++v)
            for (int x = 0; x < n; ++x) dynamics[t][v][x] = nearest(s.f[t][v] * grid[x]);

    return tabulate(s, std::move(grid), std::move(dynamics));
}

}  // namespace takeover
