#include "takeover/sim.hpp"

#include "takeover/errors.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <vector>

namespace takeover {

namespace {

inline uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

inline uint64_t splitmix64_next(uint64_t& state) {
    uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

Rng::Rng(uint64_t seed) {
    uint64_t sm = seed;
    for (auto& lane : s_) lane = splitmix64_next(sm);
}

uint64_t Rng::next_u64() {
    const uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::next_double() { return (double)(next_u64() >> 11) * 0x1.0p-53; }

int Rng::sample(const std::vector<double>& prob) {
    if (prob.empty()) throw SolveError("sample: empty distribution");
    const double r = next_double();
    double cum = 0.0;
    for (size_t i = 0; i < prob.size(); ++i) {
        cum += std::max(prob[i], 0.0);
        if (r < cum) return (int)i;
    }
    return (int)prob.size() - 1;  // cumulative sum fell short of 1 by rounding
}

uint64_t Rng::stream_seed(uint64_t seed, uint64_t index) {
    // One splitmix64 draw from a state derived from (seed, index); adjacent
    // indices land in unrelated states.
    uint64_t sm = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    return splitmix64_next(sm);
}

Trajectory rollout(const ScalarProblem& prob, const ScalarTable& policy, double x1, int start_node,
                   uint64_t seed) {
    const int L = prob.horizon;
    const int nodes = prob.form.node_count();
    if (start_node < 0 || start_node >= nodes) throw SpecError("rollout: start node out of range");
    if ((int)policy.policy_defender.size() != L || (int)policy.p.size() != L + 1)
        throw SpecError("rollout: policy table does not match the problem horizon");

    Rng rng(seed);
    Trajectory tr;
    tr.steps.reserve(L);
    int node = start_node;
    double x = x1;
    for (int t = 0; t < L; ++t) {
        const NodeGame& ng = prob.form.nodes[node];
        const int di = rng.sample(policy.policy_defender[t][node]);
        const int ai = rng.sample(policy.policy_adversary[t][node]);
        const double x2 = x * x;
        double cost = prob.g[t][node] * x2;
        if (ng.defender[di].cost_node >= 0) cost += prob.d[t][ng.defender[di].cost_node] * x2;
        if (ng.adversary[ai].cost_node >= 0) cost -= prob.a[t][ng.adversary[ai].cost_node] * x2;

        tr.steps.push_back(TrajectoryStep{t, node, x, di, ai, cost});
        tr.total_cost += cost;
        node = ng.next_at(di, ai);
        x *= prob.f[t][node];
    }
    tr.final_node = node;
    tr.final_x = x;
    tr.terminal_cost = prob.g[L][node] * x * x;
    tr.total_cost += tr.terminal_cost;
    return tr;
}

Trajectory rollout(const GridSpec& spec, const GameForm& form, const GridTable& policy,
                   int x1_index, int start_node, uint64_t seed) {
    const int L = spec.horizon;
    const int nodes = spec.graph.node_count;
    if (start_node < 0 || start_node >= nodes) throw SpecError("rollout: start node out of range");
    if (x1_index < 0 || x1_index >= (int)spec.grid.size())
        throw SpecError("rollout: start grid index out of range");
    if ((int)policy.policy_defender.size() != L || (int)policy.value.size() != L + 1)
        throw SpecError("rollout: policy table does not match the spec horizon");

    Rng rng(seed);
    Trajectory tr;
    tr.steps.reserve(L);
    int node = start_node;
    int xi = x1_index;
    for (int t = 0; t < L; ++t) {
        const NodeGame& ng = form.nodes[node];
        const int di = rng.sample(policy.policy_defender[t][node][xi]);
        const int ai = rng.sample(policy.policy_adversary[t][node][xi]);
        double cost = spec.g[t][node][xi];
        if (ng.defender[di].cost_node >= 0) cost += spec.d[t][ng.defender[di].cost_node][xi];
        if (ng.adversary[ai].cost_node >= 0) cost -= spec.a[t][ng.adversary[ai].cost_node][xi];

        tr.steps.push_back(TrajectoryStep{t, node, spec.grid[xi], di, ai, cost});
        tr.total_cost += cost;
        node = ng.next_at(di, ai);
        xi = spec.dynamics[t][node][xi];
    }
    tr.final_node = node;
    tr.final_x = spec.grid[xi];
    tr.terminal_cost = spec.g[L][node][xi];
    tr.total_cost += tr.terminal_cost;
    return tr;
}

Estimate estimate_expected_cost(const ScalarProblem& prob, const ScalarTable& policy, double x1,
                                int start_node, long samples, uint64_t seed, RunMode mode) {
    if (samples < 1) throw SpecError("estimate_expected_cost: need at least one sample");
    std::vector<double> costs((size_t)samples, 0.0);
    std::exception_ptr failure = nullptr;

    const bool parallel = mode == RunMode::parallel;
#pragma omp parallel for schedule(static) if (parallel)
    for (long i = 0; i < samples; ++i) {
        try {
            costs[(size_t)i] = rollout(prob, policy, x1, start_node, Rng::stream_seed(seed, (uint64_t)i)).total_cost;
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    // Fixed-order reduction: the estimate is independent of how the rollouts
    // were scheduled.
    Estimate e;
    e.samples = samples;
    double sum = 0.0;
    for (double c : costs) sum += c;
    e.mean = sum / (double)samples;
    if (samples < 2) {
        e.degenerate = true;
        return e;
    }
    double ss = 0.0;
    for (double c : costs) ss += (c - e.mean) * (c - e.mean);
    e.std_error = std::sqrt(ss / ((double)samples - 1.0) / (double)samples);
    return e;
}

namespace {

Estimate reduce_costs(const std::vector<double>& costs) {
    Estimate e;
    e.samples = (long)costs.size();
    double sum = 0.0;
    for (double c : costs) sum += c;
    e.mean = sum / (double)e.samples;
    if (e.samples < 2) {
        e.degenerate = true;
        return e;
    }
    double ss = 0.0;
    for (double c : costs) ss += (c - e.mean) * (c - e.mean);
    e.std_error = std::sqrt(ss / ((double)e.samples - 1.0) / (double)e.samples);
    return e;
}

}  // namespace

Estimate estimate_expected_cost(const GridSpec& spec, const GameForm& form, const GridTable& policy,
                                int x1_index, int start_node, long samples, uint64_t seed, RunMode mode) {
    if (samples < 1) throw SpecError("estimate_expected_cost: need at least one sample");
    std::vector<double> costs((size_t)samples, 0.0);
    std::exception_ptr failure = nullptr;

    const bool parallel = mode == RunMode::parallel;
#pragma omp parallel for schedule(static) if (parallel)
    for (long i = 0; i < samples; ++i) {
        try {
            costs[(size_t)i] =
                rollout(spec, form, policy, x1_index, start_node, Rng::stream_seed(seed, (uint64_t)i)).total_cost;
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return reduce_costs(costs);
}

namespace {

/// Expected stage-matrix payoff of each of the responder's options against
/// the opponent's fixed mixture; best = min for the defender, max for the
/// adversary.
double respond(const GameMatrix& m, const std::vector<double>& opponent, Side responder) {
    if (responder == Side::defender) {
        double best = 0.0;
        for (int i = 0; i < m.rows; ++i) {
            double v = 0.0;
            for (int j = 0; j < m.cols; ++j) v += m.at(i, j) * opponent[j];
            if (i == 0 || v < best) best = v;
        }
        return best;
    }
    double best = 0.0;
    for (int j = 0; j < m.cols; ++j) {
        double v = 0.0;
        for (int i = 0; i < m.rows; ++i) v += m.at(i, j) * opponent[i];
        if (j == 0 || v > best) best = v;
    }
    return best;
}

}  // namespace

std::vector<std::vector<double>> best_response_table(const ScalarProblem& prob,
                                                     const ScalarTable& policy, Side responder) {
    const int L = prob.horizon;
    const int nodes = prob.form.node_count();
    if ((int)policy.policy_defender.size() != L)
        throw SpecError("best_response_table: policy table does not match the problem horizon");

    std::vector<std::vector<double>> b(L + 1, std::vector<double>(nodes, 0.0));
    b[L] = prob.g[L];
    for (int t = L - 1; t >= 0; --t) {
        for (int v = 0; v < nodes; ++v) {
            GameMatrix m = scaled_cost_to_go(prob.form.nodes[v], prob.f[t], prob.d[t], prob.a[t], b[t + 1]);
            const std::vector<double>& opp = responder == Side::defender ? policy.policy_adversary[t][v]
                                                                         : policy.policy_defender[t][v];
            b[t][v] = prob.g[t][v] + respond(m, opp, responder);
        }
    }
    return b;
}

double best_response_value(const ScalarProblem& prob, const ScalarTable& policy, Side responder,
                           double x1, int start_node) {
    if (start_node < 0 || start_node >= prob.form.node_count())
        throw SpecError("best_response_value: start node out of range");
    return best_response_table(prob, policy, responder)[0][start_node] * x1 * x1;
}

std::vector<std::vector<std::vector<double>>> best_response_table(const GridSpec& spec,
                                                                  const GameForm& form,
                                                                  const GridTable& policy,
                                                                  Side responder) {
    const int L = spec.horizon;
    const int nodes = spec.graph.node_count;
    const int grid = (int)spec.grid.size();
    if ((int)policy.policy_defender.size() != L)
        throw SpecError("best_response_table: policy table does not match the spec horizon");

    std::vector<std::vector<std::vector<double>>> b(
        L + 1, std::vector<std::vector<double>>(nodes, std::vector<double>(grid, 0.0)));
    b[L] = spec.g[L];
    for (int t = L - 1; t >= 0; --t) {
        for (int v = 0; v < nodes; ++v) {
            for (int x = 0; x < grid; ++x) {
                GameMatrix m = cost_to_go(spec, form, t, v, x, b[t + 1]);
                const std::vector<double>& opp = responder == Side::defender
                                                     ? policy.policy_adversary[t][v][x]
                                                     : policy.policy_defender[t][v][x];
                b[t][v][x] = spec.g[t][v][x] + respond(m, opp, responder);
            }
        }
    }
    return b;
}

SaddleReport saddle_check(const ScalarProblem& prob, const ScalarTable& solved, double x1,
                          int start_node, double tol) {
    SaddleReport r;
    r.value = value_at(solved, 0, start_node, x1);
    r.best_response_defender = best_response_value(prob, solved, Side::defender, x1, start_node);
    r.best_response_adversary = best_response_value(prob, solved, Side::adversary, x1, start_node);
    r.gap_defender = std::max(0.0, r.value - r.best_response_defender);
    r.gap_adversary = std::max(0.0, r.best_response_adversary - r.value);
    r.ok = r.gap_defender <= tol && r.gap_adversary <= tol;
    return r;
}

SaddleReport saddle_check_all(const ScalarProblem& prob, const ScalarTable& solved, double x1,
                              double tol) {
    const auto bd = best_response_table(prob, solved, Side::defender);
    const auto ba = best_response_table(prob, solved, Side::adversary);
    SaddleReport worst;
    worst.ok = true;
    for (int v = 0; v < prob.form.node_count(); ++v) {
        const double value = solved.p[0][v] * x1 * x1;
        const double brd = bd[0][v] * x1 * x1;
        const double bra = ba[0][v] * x1 * x1;
        const double gd = std::max(0.0, value - brd);
        const double ga = std::max(0.0, bra - value);
        if (v == 0 || gd + ga > worst.gap_defender + worst.gap_adversary) {
            worst.value = value;
            worst.best_response_defender = brd;
            worst.best_response_adversary = bra;
        }
        worst.gap_defender = std::max(worst.gap_defender, gd);
        worst.gap_adversary = std::max(worst.gap_adversary, ga);
    }
    worst.ok = worst.gap_defender <= tol && worst.gap_adversary <= tol;
    return worst;
}

SaddleReport saddle_check_all(const GridSpec& spec, const GameForm& form, const GridTable& solved,
                              double tol) {
    const auto bd = best_response_table(spec, form, solved, Side::defender);
    const auto ba = best_response_table(spec, form, solved, Side::adversary);
    SaddleReport worst;
    worst.ok = true;
    bool first = true;
    for (int v = 0; v < spec.graph.node_count; ++v) {
        for (int x = 0; x < (int)spec.grid.size(); ++x) {
            const double value = solved.value[0][v][x];
            const double gd = std::max(0.0, value - bd[0][v][x]);
            const double ga = std::max(0.0, ba[0][v][x] - value);
            if (first || gd + ga > worst.gap_defender + worst.gap_adversary) {
                worst.value = value;
                worst.best_response_defender = bd[0][v][x];
                worst.best_response_adversary = ba[0][v][x];
                first = false;
            }
            worst.gap_defender = std::max(worst.gap_defender, gd);
            worst.gap_adversary = std::max(worst.gap_adversary, ga);
        }
    }
    worst.ok = worst.gap_defender <= tol && worst.gap_adversary <= tol;
    return worst;
}

}  // namespace takeover
