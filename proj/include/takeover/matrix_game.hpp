#pragma once

#include <optional>
#include <vector>

namespace takeover {

/// Dense row-major matrix of a two-player zero-sum game.  The row player
/// minimizes, the column player maximizes.
struct GameMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> v;

    GameMatrix() = default;
    GameMatrix(int r, int c) : rows(r), cols(c), v(static_cast<size_t>(r) * c, 0.0) {}

    double& at(int i, int j) { return v[static_cast<size_t>(i) * cols + j]; }
    double at(int i, int j) const { return v[static_cast<size_t>(i) * cols + j]; }
};

struct GameSolution {
    double value = 0.0;
    std::vector<double> row_strategy;  // minimizer mixture over rows
    std::vector<double> col_strategy;  // maximizer mixture over columns
    bool pure = false;
};

struct PureSaddle {
    int row = 0;
    int col = 0;
    double value = 0.0;
};

/// Entry that is simultaneously the minimum of its column and the maximum of
/// its row (non-strict).  Lexicographically smallest (row, col) on ties.
std::optional<PureSaddle> find_pure_saddle(const GameMatrix& m);

/// Closed form for 2x2 games with no pure saddle; the denominator
/// a11 + a22 - a12 - a21 is then nonzero.  Precondition checked.
GameSolution solve_2x2(const GameMatrix& m);

/// Value and optimal mixtures of an arbitrary matrix game.  Pure saddles are
/// returned as unit vectors; otherwise the game is shifted positive and both
/// players' LPs are solved by a dense simplex.  Throws SolveError if the
/// matrix has non-finite entries, primal and dual disagree, or the simplex
/// stalls.
GameSolution solve_zero_sum(const GameMatrix& m);

struct Verification {
    bool ok = false;
    double max_violation = 0.0;
};

/// Saddle certificate: y'A e_j <= value + tol for every column j and
/// e_i'A z >= value - tol for every row i.
Verification verify_solution(const GameMatrix& m, const GameSolution& s, double tol = 1e-8);

}  // namespace takeover
