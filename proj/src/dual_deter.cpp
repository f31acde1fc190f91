#include "takeover/dual_deter.hpp"

#include "takeover/errors.hpp"

#include <cmath>
#include <utility>
#include <vector>

namespace takeover {

namespace {

constexpr double kTieEps = 1e-12;
constexpr double kAgreeTol = 1e-8;

bool near(double u, double w) { return std::abs(u - w) <= kTieEps; }

double scaled(const std::vector<double>& f_t, const std::vector<double>& p_next, int node) {
    return f_t[node] * f_t[node] * p_next[node];
}

NodeClosedForm pure(ChainBranch b, double p, int yi, int zi) {
    NodeClosedForm r;
    r.branch = b;
    r.p = p;
    r.y = {yi == 0 ? 1.0 : 0.0, yi == 0 ? 0.0 : 1.0};
    r.z = {zi == 0 ? 1.0 : 0.0, zi == 0 ? 0.0 : 1.0};
    return r;
}

bool plausible_mixture(const std::vector<double>& w) {
    double sum = 0.0;
    for (double x : w) {
        if (!std::isfinite(x) || x < -kTieEps || x > 1.0 + kTieEps) return false;
        sum += x;
    }
    return std::abs(sum - 1.0) <= 1e-9;
}

void clamp_mixture(std::vector<double>& w) {
    double sum = 0.0;
    for (double& x : w) {
        if (x < 0.0) x = 0.0;
        if (x > 1.0) x = 1.0;
        sum += x;
    }
    for (double& x : w) x /= sum;
}

}  // namespace

const char* to_string(ChainBranch b) {
    switch (b) {
        case ChainBranch::lp_tie: return "lp_tie";
        case ChainBranch::start_idle: return "start_idle";
        case ChainBranch::start_takeover: return "start_takeover";
        case ChainBranch::start_mixed: return "start_mixed";
        case ChainBranch::interior_idle: return "interior_idle";
        case ChainBranch::interior_defend: return "interior_defend";
        case ChainBranch::interior_attack: return "interior_attack";
        case ChainBranch::interior_both: return "interior_both";
        case ChainBranch::interior_mixed: return "interior_mixed";
        case ChainBranch::end_idle: return "end_idle";
        case ChainBranch::end_takeover: return "end_takeover";
        case ChainBranch::end_mixed: return "end_mixed";
    }
    return "unknown";
}

NodeClosedForm solve_start_node(const Chain& c, const std::vector<double>& f_t,
                                const std::vector<double>& g_t, const std::vector<double>& d_t,
                                const std::vector<double>& a_t, const std::vector<double>& p_next) {
    (void)c;
    const double P0 = scaled(f_t, p_next, 0);
    const double P1 = scaled(f_t, p_next, 1);
    const double gain = P1 - P0;  // what one unopposed escalation is worth
    const double av = a_t[0], dv = d_t[0], gv = g_t[0];

    if (near(gain, av) || near(gain, dv)) return NodeClosedForm{};
    if (gain > av && gain > dv) {
        NodeClosedForm r;
        r.branch = ChainBranch::start_mixed;
        r.p = gv + P0 + dv - av * dv / gain;
        r.y = {av / gain, 1.0 - av / gain};
        r.z = {1.0 - dv / gain, dv / gain};
        return r;
    }
    if (gain <= av) return pure(ChainBranch::start_idle, gv + P0, 0, 0);
    return pure(ChainBranch::start_takeover, gv + P1 - av, 0, 1);
}

NodeClosedForm solve_interior_node(const Chain& c, int node, const std::vector<double>& f_t,
                                   const std::vector<double>& g_t, const std::vector<double>& d_t,
                                   const std::vector<double>& a_t, const std::vector<double>& p_next) {
    if (node <= 0 || node >= c.length) throw SpecError("solve_interior_node: node is not interior");
    const double Pa = scaled(f_t, p_next, node);
    const double Plo = scaled(f_t, p_next, c.down[node]);
    const double Phi = scaled(f_t, p_next, c.up[node]);
    const double drop = Pa - Plo;   // value shed by retreating
    const double climb = Pa - Phi;  // value shed when the adversary escalates
    const double av = a_t[node], dv = d_t[node], gv = g_t[node];

    if (near(-drop, av) || near(climb, av) || near(climb, dv) || near(-drop, dv)) return NodeClosedForm{};

    if (-drop < av && climb < av && climb < dv) return pure(ChainBranch::interior_idle, gv + Pa, 0, 0);
    if (-drop < av && climb < av && climb > dv) return pure(ChainBranch::interior_defend, gv + Plo + dv, 1, 0);
    if (-drop > av && climb > av && -drop < dv) return pure(ChainBranch::interior_attack, gv + Phi - av, 0, 1);
    if (-drop > av && climb > av && -drop > dv) return pure(ChainBranch::interior_both, gv + Pa - av + dv, 1, 1);

    const double den = drop + climb;
    if (std::abs(den) <= kTieEps) return NodeClosedForm{};
    NodeClosedForm r;
    r.branch = ChainBranch::interior_mixed;
    r.p = gv + (Pa * Pa + av * dv + drop * dv - climb * av - Plo * Phi) / den;
    r.y = {(drop - av) / den, (climb + av) / den};
    r.z = {(drop + dv) / den, (climb - dv) / den};
    return r;
}

NodeClosedForm solve_end_node(const Chain& c, const std::vector<double>& f_t,
                              const std::vector<double>& g_t, const std::vector<double>& d_t,
                              const std::vector<double>& a_t, const std::vector<double>& p_next) {
    const int n = c.length;
    const double PN = scaled(f_t, p_next, n);
    const double PN1 = scaled(f_t, p_next, n - 1);
    const double gain = PN - PN1;  // what one unopposed pushback recovers
    const double av = a_t[n], dv = d_t[n], gv = g_t[n];

    if (near(gain, av) || near(gain, dv)) return NodeClosedForm{};
    if (gain > av && gain > dv) {
        NodeClosedForm r;
        r.branch = ChainBranch::end_mixed;
        r.p = gv + PN - dv + av * dv / gain;
        r.y = {1.0 - av / gain, av / gain};
        r.z = {dv / gain, 1.0 - dv / gain};
        return r;
    }
    if (gain > av) return pure(ChainBranch::end_takeover, gv + PN1 + dv, 1, 0);
    return pure(ChainBranch::end_idle, gv + PN, 0, 0);
}

ChainSolveResult solve_closed_form(const ChainSpec& spec) {
    const ScalarProblem prob = lower(spec);  // validates shapes and signs
    const int nodes = prob.form.node_count();
    const int L = prob.horizon;
    const Chain& c = spec.chain;

    ChainSolveResult out;
    out.table.p.assign(L + 1, std::vector<double>(nodes, 0.0));
    out.table.p[L] = prob.g[L];
    out.table.policy_defender.assign(L, std::vector<std::vector<double>>(nodes));
    out.table.policy_adversary.assign(L, std::vector<std::vector<double>>(nodes));
    out.records.reserve(static_cast<size_t>(L) * nodes);

    for (int t = L - 1; t >= 0; --t) {
        const std::vector<double>& pn = out.table.p[t + 1];
        for (int v = 0; v < nodes; ++v) {
            NodeClosedForm cf;
            if (v == 0)
                cf = solve_start_node(c, prob.f[t], prob.g[t], prob.d[t], prob.a[t], pn);
            else if (v == c.length)
                cf = solve_end_node(c, prob.f[t], prob.g[t], prob.d[t], prob.a[t], pn);
            else
                cf = solve_interior_node(c, v, prob.f[t], prob.g[t], prob.d[t], prob.a[t], pn);

            GameMatrix m = scaled_cost_to_go(prob.form.nodes[v], prob.f[t], prob.d[t], prob.a[t], pn);
            GameSolution lp = solve_zero_sum(m);
            const double lp_p = prob.g[t][v] + lp.value;

            BranchRecord rec;
            rec.stage = t;
            rec.node = v;
            rec.branch = cf.branch;
            rec.lp_value = lp_p;

            bool use_lp = true;
            if (cf.branch != ChainBranch::lp_tie) {
                rec.closed_value = cf.p;
                bool value_ok = std::isfinite(cf.p) && std::abs(cf.p - lp_p) <= kAgreeTol;
                bool mix_ok = plausible_mixture(cf.y) && plausible_mixture(cf.z);
                bool cert_ok = false;
                if (value_ok && mix_ok) {
                    GameSolution cand;
                    cand.value = cf.p - prob.g[t][v];
                    cand.row_strategy = cf.y;
                    cand.col_strategy = cf.z;
                    cert_ok = verify_solution(m, cand, kAgreeTol).ok;
                }
                rec.agreed = value_ok && mix_ok && cert_ok;
                use_lp = !rec.agreed;
                if (use_lp) ++out.overridden;
            }
            rec.used_lp = use_lp;
            out.records.push_back(rec);

            if (use_lp) {
                out.table.p[t][v] = lp_p;
                out.table.policy_defender[t][v] = std::move(lp.row_strategy);
                out.table.policy_adversary[t][v] = std::move(lp.col_strategy);
            } else {
                clamp_mixture(cf.y);
                clamp_mixture(cf.z);
                out.table.p[t][v] = cf.p;
                out.table.policy_defender[t][v] = std::move(cf.y);
                out.table.policy_adversary[t][v] = std::move(cf.z);
            }
        }
    }
    return out;
}

}  // namespace takeover
