#include "takeover/scalar.hpp"

#include "takeover/errors.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace takeover {

namespace {

void check_table(std::vector<std::string>& issues, const Table& t, const char* name, int rows, int cols,
                 bool nonneg) {
    if ((int)t.size() != rows) {
        issues.push_back(std::string(name) + ": expected " + std::to_string(rows) + " stage rows, got " +
                         std::to_string(t.size()));
        return;
    }
    for (int r = 0; r < rows; ++r) {
        if ((int)t[r].size() != cols) {
            issues.push_back(std::string(name) + "[" + std::to_string(r) + "]: expected " + std::to_string(cols) +
                             " node entries, got " + std::to_string(t[r].size()));
            continue;
        }
        for (int c = 0; c < cols; ++c) {
            double v = t[r][c];
            if (!std::isfinite(v))
                issues.push_back(std::string(name) + "[" + std::to_string(r) + "][" + std::to_string(c) +
                                 "]: must be finite");
            else if (nonneg && v < 0.0)
                issues.push_back(std::string(name) + "[" + std::to_string(r) + "][" + std::to_string(c) +
                                 "]: costs must be nonnegative, got " + std::to_string(v));
        }
    }
}

ScalarProblem assemble(GameForm form, int horizon, Table f, Table g, Table d, Table a) {
    ScalarProblem p;
    p.form = std::move(form);
    p.horizon = horizon;
    p.f = std::move(f);
    p.g = std::move(g);
    p.d = std::move(d);
    p.a = std::move(a);
    validate(p);
    return p;
}

}  // namespace

ScalarProblem lower(const ScalarSpec& s) {
    return assemble(game_form(s.graph), s.horizon, s.f, s.g, s.d, s.a);
}

ScalarProblem lower(const ChainSpec& s) {
    return assemble(game_form(s.chain), s.horizon, s.f, s.g, s.d, s.a);
}

void validate(const ScalarProblem& p) {
    std::vector<std::string> issues;
    const int nodes = p.form.node_count();
    if (nodes < 1) issues.push_back("form: game has no nodes");
    if (p.horizon < 1) issues.push_back("horizon: must be at least 1, got " + std::to_string(p.horizon));
    if (!issues.empty()) throw SpecError(issues);

    check_table(issues, p.f, "dynamics.f", p.horizon, nodes, false);
    check_table(issues, p.g, "costs.g", p.horizon + 1, nodes, true);
    check_table(issues, p.d, "costs.d", p.horizon, nodes, true);
    check_table(issues, p.a, "costs.a", p.horizon, nodes, true);

    for (int v = 0; v < nodes; ++v) {
        const NodeGame& ng = p.form.nodes[v];
        if (ng.defender.empty() || ng.adversary.empty()) {
            issues.push_back("form.nodes[" + std::to_string(v) + "]: empty option list");
            continue;
        }
        if (ng.next.size() != ng.defender.size() * ng.adversary.size())
            issues.push_back("form.nodes[" + std::to_string(v) + "]: holder-update table has the wrong shape");
        auto check_side = [&](const std::vector<StageAction>& side, const char* who) {
            for (size_t k = 0; k < side.size(); ++k) {
                if (side[k].target < 0 || side[k].target >= nodes)
                    issues.push_back("form.nodes[" + std::to_string(v) + "]." + who + "[" + std::to_string(k) +
                                     "]: target out of range");
                if (side[k].cost_node >= nodes)
                    issues.push_back("form.nodes[" + std::to_string(v) + "]." + who + "[" + std::to_string(k) +
                                     "]: cost node out of range");
            }
        };
        check_side(ng.defender, "defender");
        check_side(ng.adversary, "adversary");
        for (int nx : ng.next)
            if (nx < 0 || nx >= nodes)
                issues.push_back("form.nodes[" + std::to_string(v) + "].next: node out of range");
    }
    if (!issues.empty()) throw SpecError(issues);
}

GameMatrix scaled_cost_to_go(const NodeGame& node, const std::vector<double>& f_t,
                             const std::vector<double>& d_t, const std::vector<double>& a_t,
                             const std::vector<double>& p_next) {
    const int rows = (int)node.defender.size();
    const int cols = (int)node.adversary.size();
    GameMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        double dd = node.defender[i].cost_node < 0 ? 0.0 : d_t[node.defender[i].cost_node];
        for (int j = 0; j < cols; ++j) {
            double aa = node.adversary[j].cost_node < 0 ? 0.0 : a_t[node.adversary[j].cost_node];
            int nx = node.next_at(i, j);
            m.at(i, j) = f_t[nx] * f_t[nx] * p_next[nx] + dd - aa;
        }
    }
    return m;
}

ScalarTable solve_lp(const ScalarProblem& prob) {
    validate(prob);
    const int nodes = prob.form.node_count();
    const int L = prob.horizon;

    ScalarTable out;
    out.p.assign(L + 1, std::vector<double>(nodes, 0.0));
    out.p[L] = prob.g[L];  // terminal coefficients pass through untouched
    out.policy_defender.assign(L, std::vector<std::vector<double>>(nodes));
    out.policy_adversary.assign(L, std::vector<std::vector<double>>(nodes));

    for (int t = L - 1; t >= 0; --t) {
        for (int v = 0; v < nodes; ++v) {
            GameMatrix m = scaled_cost_to_go(prob.form.nodes[v], prob.f[t], prob.d[t], prob.a[t], out.p[t + 1]);
            GameSolution sol = solve_zero_sum(m);
            out.p[t][v] = prob.g[t][v] + sol.value;
            out.policy_defender[t][v] = std::move(sol.row_strategy);
            out.policy_adversary[t][v] = std::move(sol.col_strategy);
        }
    }
    return out;
}

double value_at(const ScalarTable& t, int stage, int node, double x) {
    if (stage < 0 || stage >= (int)t.p.size()) throw SpecError("value_at: stage out of range");
    if (node < 0 || node >= (int)t.p[stage].size()) throw SpecError("value_at: node out of range");
    return t.p[stage][node] * x * x;
}

}  // namespace takeover
