#pragma once

#include "takeover/grid.hpp"
#include "takeover/scalar.hpp"

#include <cstdint>
#include <vector>

namespace takeover {

/// xoshiro256** with splitmix64 seeding, fixed here by its update equations
/// so sampled runs replay identically everywhere:
///   splitmix64:  z = (s += 0x9E3779B97F4A7C15);
///                z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
///                z = (z ^ (z >> 27)) * 0x94D049BB133111EB;  return z ^ (z >> 31)
///   xoshiro256**: r = rotl(s1 * 5, 7) * 9; t = s1 << 17;
///                 s2 ^= s0; s3 ^= s1; s1 ^= s2; s0 ^= s3; s2 ^= t;
///                 s3 = rotl(s3, 45)
/// Doubles are (r >> 11) * 2^-53 in [0, 1).
class Rng {
  public:
    explicit Rng(uint64_t seed);
    uint64_t next_u64();
    double next_double();
    /// Index sampled by inverse CDF walk over `prob` (assumed ~simplex).
    int sample(const std::vector<double>& prob);

    /// Seed for an indexed substream; rollout i of a run seeded with s uses
    /// stream_seed(s, i), keeping parallel sampling order-independent.
    static uint64_t stream_seed(uint64_t seed, uint64_t index);

  private:
    uint64_t s_[4];
};

struct TrajectoryStep {
    int stage = 0;  // 0-based
    int node = 0;
    double x = 0.0;
    int defender_choice = 0;  // index into the node's option list
    int adversary_choice = 0;
    double cost = 0.0;  // stage cost + takeover prices, all scaled by x^2
};

struct Trajectory {
    std::vector<TrajectoryStep> steps;
    int final_node = 0;
    double final_x = 0.0;
    double terminal_cost = 0.0;
    double total_cost = 0.0;
};

/// One sampled play of the scalar game under the given stage policies.
Trajectory rollout(const ScalarProblem& prob, const ScalarTable& policy, double x1, int start_node,
                   uint64_t seed);

/// Grid-game rollout; x is carried as a grid index.
Trajectory rollout(const GridSpec& spec, const GameForm& form, const GridTable& policy,
                   int x1_index, int start_node, uint64_t seed);

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    long samples = 0;
    bool degenerate = false;  // fewer than two samples: no spread estimate
};

/// Monte-Carlo mean of the total cost over `samples` rollouts with
/// per-rollout substreams.  The reduction order is fixed, so serial and
/// parallel runs return bit-identical results.
Estimate estimate_expected_cost(const ScalarProblem& prob, const ScalarTable& policy, double x1,
                                int start_node, long samples, uint64_t seed,
                                RunMode mode = RunMode::parallel);

/// Grid-game analogue of the estimator above; the start state is a grid index.
Estimate estimate_expected_cost(const GridSpec& spec, const GameForm& form, const GridTable& policy,
                                int x1_index, int start_node, long samples, uint64_t seed,
                                RunMode mode = RunMode::parallel);

enum class Side { defender, adversary };

/// Exact value of the responder's best reply against the fixed opponent
/// mixtures, by backward induction on coefficients (state-independent).
/// Returns the coefficient table b; the value from (node, x) is b[0][node] x^2.
std::vector<std::vector<double>> best_response_table(const ScalarProblem& prob,
                                                     const ScalarTable& policy, Side responder);

double best_response_value(const ScalarProblem& prob, const ScalarTable& policy, Side responder,
                           double x1, int start_node);

/// Grid-game analogue; responder optimizes at every (stage, node, grid) cell.
std::vector<std::vector<std::vector<double>>> best_response_table(const GridSpec& spec,
                                                                  const GameForm& form,
                                                                  const GridTable& policy,
                                                                  Side responder);

struct SaddleReport {
    double value = 0.0;
    double best_response_defender = 0.0;   // defender deviates, adversary fixed
    double best_response_adversary = 0.0;  // adversary deviates, defender fixed
    double gap_defender = 0.0;             // value - best_response_defender
    double gap_adversary = 0.0;            // best_response_adversary - value
    bool ok = false;
};

/// Certifies the solved policies: neither side can improve by more than tol
/// from the given start.  Gaps are clipped at zero from rounding.
SaddleReport saddle_check(const ScalarProblem& prob, const ScalarTable& solved, double x1,
                          int start_node, double tol = 1e-6);

/// Worst gaps over all start nodes (x1 fixed).
SaddleReport saddle_check_all(const ScalarProblem& prob, const ScalarTable& solved, double x1,
                              double tol = 1e-6);

SaddleReport saddle_check_all(const GridSpec& spec, const GameForm& form, const GridTable& solved,
                              double tol = 1e-6);

}  // namespace takeover
