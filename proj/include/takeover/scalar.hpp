#pragma once

#include "takeover/matrix_game.hpp"
#include "takeover/stage_form.hpp"

#include <vector>

namespace takeover {

/// Stage-indexed coefficient table, row t = decision epoch t+1.
using Table = std::vector<std::vector<double>>;

/// Quadratic-cost game with linear per-node state scaling: while the holder
/// moves to node b the state is multiplied by f[t][b]; stage, defender and
/// adversary costs are g[t][node] x^2, d[t][node] x^2, a[t][node] x^2.
/// Sizes: f, d, a are horizon x nodes; g is (horizon+1) x nodes, the last
/// row being the terminal cost.
struct ScalarProblem {
    GameForm form;
    int horizon = 0;
    Table f, g, d, a;
};

/// Graph-shaped scalar spec.  Costs are indexed by the node a move targets.
struct ScalarSpec {
    Graph graph;
    int horizon = 0;
    Table f, g, d, a;
};

/// Chain-shaped scalar spec.  Costs are indexed by the node being held.
struct ChainSpec {
    Chain chain;
    int horizon = 0;
    Table f, g, d, a;
};

ScalarProblem lower(const ScalarSpec& s);
ScalarProblem lower(const ChainSpec& s);

/// Validates shapes, finiteness and cost nonnegativity; throws SpecError
/// with one message per violation.
void validate(const ScalarProblem& p);

/// Solved coefficient table.  value at (t, node, x) = p[t][node] * x^2.
/// policy_* [t][node] are mixtures over the node's option list in form.
struct ScalarTable {
    std::vector<std::vector<double>> p;  // (horizon+1) x nodes
    std::vector<std::vector<std::vector<double>>> policy_defender;  // horizon x nodes x options
    std::vector<std::vector<std::vector<double>>> policy_adversary;
};

/// Stage matrix at one node with the continuation coefficients p_next:
/// entry(i,j) = f[next]^2 p_next[next] + defender price - adversary price.
GameMatrix scaled_cost_to_go(const NodeGame& node, const std::vector<double>& f_t,
                             const std::vector<double>& d_t, const std::vector<double>& a_t,
                             const std::vector<double>& p_next);

/// Backward induction with every stage game solved by solve_zero_sum.
ScalarTable solve_lp(const ScalarProblem& prob);

inline ScalarTable solve(const ScalarSpec& s) { return solve_lp(lower(s)); }

double value_at(const ScalarTable& t, int stage, int node, double x);

}  // namespace takeover
