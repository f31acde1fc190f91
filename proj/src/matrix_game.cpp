#include "takeover/matrix_game.hpp"

#include "takeover/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace takeover {

namespace {

constexpr double kPivotEps = 1e-11;

/// Full-tableau simplex for: maximize c.x subject to Ax <= b, x >= 0, with
/// b >= 0 so the slack basis starts feasible.  Bland's rule throughout, so
/// no cycling.  Returns primal x, dual prices y (one per constraint) and the
/// objective value.
struct SimplexResult {
    std::vector<double> x, y;
    double objective = 0.0;
};

SimplexResult simplex_max(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                          const std::vector<double>& c) {
    const int m = (int)A.size();
    const int n = (int)c.size();
    const int width = n + m + 1;
    std::vector<std::vector<double>> T(m + 1, std::vector<double>(width, 0.0));
    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) T[i][j] = A[i][j];
        T[i][n + i] = 1.0;
        T[i][width - 1] = b[i];
        basis[i] = n + i;
    }
    for (int j = 0; j < n; ++j) T[m][j] = -c[j];

    const int max_iter = 2000 + 200 * (m + n);
    for (int iter = 0;; ++iter) {
        if (iter > max_iter) throw SolveError("simplex: iteration limit hit (" + std::to_string(max_iter) + ")");
        int enter = -1;
        for (int j = 0; j < n + m; ++j)
            if (T[m][j] < -kPivotEps) { enter = j; break; }
        if (enter < 0) break;

        int leave = -1;
        double best_ratio = 0.0;
        for (int i = 0; i < m; ++i) {
            if (T[i][enter] <= kPivotEps) continue;
            double ratio = T[i][width - 1] / T[i][enter];
            if (leave < 0 || ratio < best_ratio - 1e-15 ||
                (std::abs(ratio - best_ratio) <= 1e-15 && basis[i] < basis[leave])) {
                leave = i;
                best_ratio = ratio;
            }
        }
        if (leave < 0) throw SolveError("simplex: unbounded objective");

        double piv = T[leave][enter];
        for (int j = 0; j < width; ++j) T[leave][j] /= piv;
        T[leave][enter] = 1.0;
        for (int i = 0; i <= m; ++i) {
            if (i == leave) continue;
            double factor = T[i][enter];
            if (factor == 0.0) continue;
            for (int j = 0; j < width; ++j) T[i][j] -= factor * T[leave][j];
            T[i][enter] = 0.0;
        }
        basis[leave] = enter;
    }

    SimplexResult r;
    r.x.assign(n, 0.0);
    for (int i = 0; i < m; ++i)
        if (basis[i] < n) r.x[basis[i]] = T[i][width - 1];
    r.y.assign(m, 0.0);
    for (int i = 0; i < m; ++i) r.y[i] = T[m][n + i];
    r.objective = T[m][width - 1];
    return r;
}

void require_finite(const GameMatrix& m) {
    for (double x : m.v)
        if (!std::isfinite(x)) throw SolveError("matrix game: non-finite entry");
    if (m.rows < 1 || m.cols < 1 || (int)m.v.size() != m.rows * m.cols)
        throw SolveError("matrix game: malformed matrix");
}

std::vector<double> normalized(std::vector<double> w, const char* who) {
    double sum = 0.0;
    for (double& x : w) {
        if (x < 0.0) {
            if (x < -1e-9) throw SolveError(std::string("matrix game: negative ") + who + " weight");
            x = 0.0;
        }
        sum += x;
    }
    if (sum <= 0.0) throw SolveError(std::string("matrix game: ") + who + " weights sum to zero");
    for (double& x : w) x /= sum;
    return w;
}

}  // namespace

std::optional<PureSaddle> find_pure_saddle(const GameMatrix& m) {
    for (int i = 0; i < m.rows; ++i) {
        for (int j = 0; j < m.cols; ++j) {
            double e = m.at(i, j);
            bool row_max = true, col_min = true;
            for (int jj = 0; jj < m.cols && row_max; ++jj)
                if (m.at(i, jj) > e) row_max = false;
            for (int ii = 0; ii < m.rows && col_min; ++ii)
                if (m.at(ii, j) < e) col_min = false;
            if (row_max && col_min) return PureSaddle{i, j, e};
        }
    }
    return std::nullopt;
}

GameSolution solve_2x2(const GameMatrix& m) {
    require_finite(m);
    if (m.rows != 2 || m.cols != 2) throw SolveError("solve_2x2: expected a 2x2 matrix");
    if (find_pure_saddle(m)) throw SolveError("solve_2x2: matrix has a pure saddle; use solve_zero_sum");
    double a = m.at(0, 0), b = m.at(0, 1), c = m.at(1, 0), d = m.at(1, 1);
    double den = a + d - b - c;  // nonzero without a pure saddle
    GameSolution s;
    s.value = (a * d - b * c) / den;
    s.row_strategy = {(d - c) / den, (a - b) / den};
    s.col_strategy = {(d - b) / den, (a - c) / den};
    s.pure = false;
    return s;
}

GameSolution solve_zero_sum(const GameMatrix& m) {
    require_finite(m);
    if (auto ps = find_pure_saddle(m)) {
        GameSolution s;
        s.value = ps->value;
        s.row_strategy.assign(m.rows, 0.0);
        s.col_strategy.assign(m.cols, 0.0);
        s.row_strategy[ps->row] = 1.0;
        s.col_strategy[ps->col] = 1.0;
        s.pure = true;
        return s;
    }

    double lo = *std::min_element(m.v.begin(), m.v.end());
    double shift = 1.0 - lo;  // all entries >= 1, so the value is positive

    // Minimizer's program over u = y / value:
    //   maximize sum(u)  s.t.  for every column j: sum_i u_i (A_ij + shift) <= 1
    // The dual prices are the maximizer's t = z / value.
    const int rows = m.rows, cols = m.cols;
    std::vector<std::vector<double>> A(cols, std::vector<double>(rows));
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) A[j][i] = m.at(i, j) + shift;
    SimplexResult lp = simplex_max(A, std::vector<double>(cols, 1.0), std::vector<double>(rows, 1.0));

    double primal_sum = 0.0, dual_sum = 0.0;
    for (double v : lp.x) primal_sum += v;
    for (double v : lp.y) dual_sum += v;
    if (primal_sum <= 0.0) throw SolveError("matrix game: degenerate LP solution");
    if (std::abs(primal_sum - dual_sum) > 1e-9 * std::max(1.0, primal_sum))
        throw SolveError("matrix game: primal/dual mismatch");

    GameSolution s;
    s.value = 1.0 / primal_sum - shift;
    s.row_strategy = normalized(lp.x, "row");
    s.col_strategy = normalized(lp.y, "column");
    s.pure = false;
    return s;
}

Verification verify_solution(const GameMatrix& m, const GameSolution& s, double tol) {
    Verification out;
    if ((int)s.row_strategy.size() != m.rows || (int)s.col_strategy.size() != m.cols) {
        out.max_violation = std::numeric_limits<double>::infinity();
        return out;
    }
    double worst = 0.0;
    for (int j = 0; j < m.cols; ++j) {
        double v = 0.0;
        for (int i = 0; i < m.rows; ++i) v += s.row_strategy[i] * m.at(i, j);
        worst = std::max(worst, v - s.value);  // a column the maximizer could exploit
    }
    for (int i = 0; i < m.rows; ++i) {
        double v = 0.0;
        for (int j = 0; j < m.cols; ++j) v += m.at(i, j) * s.col_strategy[j];
        worst = std::max(worst, s.value - v);  // a row the minimizer could exploit
    }
    if (!std::isfinite(worst)) worst = std::numeric_limits<double>::infinity();
    out.max_violation = worst;
    out.ok = worst <= tol;
    return out;
}

}  // namespace takeover
