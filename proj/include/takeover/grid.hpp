#pragma once

#include "takeover/scalar.hpp"

#include <vector>

namespace takeover {

enum class RunMode { serial, parallel };

/// Tabular game on an explicit state grid.  dynamics[t][b] maps a grid index
/// to the grid index the state lands on when the holder moves to node b at
/// stage t.  Costs are tabulated per grid point: g is (horizon+1) x nodes x
/// grid (terminal row last), d and a are horizon x nodes x grid and are
/// indexed by the node a move targets.
struct GridSpec {
    Graph graph;
    int horizon = 0;
    std::vector<double> grid;
    std::vector<std::vector<std::vector<int>>> dynamics;
    std::vector<std::vector<std::vector<double>>> g, d, a;
};

void validate(const GridSpec& s);

struct GridTable {
    std::vector<std::vector<std::vector<double>>> value;  // (horizon+1) x nodes x grid
    // policy_*[t][node][xi] = mixture over the node's action list
    std::vector<std::vector<std::vector<std::vector<double>>>> policy_defender;
    std::vector<std::vector<std::vector<std::vector<double>>>> policy_adversary;
};

/// Stage matrix at (stage t, node, grid index xi) given next-stage values.
GameMatrix cost_to_go(const GridSpec& s, const GameForm& form, int t, int node, int xi,
                      const std::vector<std::vector<double>>& value_next);

/// Backward induction over the grid.  In parallel mode the (node, grid)
/// cells of each stage are solved concurrently; cells are independent, so
/// both modes produce bit-identical tables.
GridTable solve(const GridSpec& s, RunMode mode = RunMode::parallel);

double value_at(const GridTable& t, int stage, int node, int xi);

/// Exact grid embedding of a scalar graph spec.  Every scaling factor must
/// be a power of two; the grid is 2^-J..2^J, J = horizon+1, so the checked
/// band {0.5, 1, 2} stays exact at every stage while the clamped outermost
/// rings never reach it.  Throws SpecError for non-power-of-two factors.
GridSpec embed_power_of_two(const ScalarSpec& s);

/// Approximate grid embedding: scaling by f is realized as
/// nearest-grid-point snapping.  Documented as approximate; use
/// embed_power_of_two when exactness matters.
GridSpec embed_snapped(const ScalarSpec& s, std::vector<double> grid);

}  // namespace takeover
