#pragma once

#include "takeover/scalar.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace takeover {

/// Which closed-form branch a chain node solve took.
enum class ChainBranch {
    lp_tie,          // a comparison tied within 1e-12; routed straight to the LP
    start_idle,
    start_takeover,
    start_mixed,
    interior_idle,
    interior_defend,
    interior_attack,
    interior_both,
    interior_mixed,
    end_idle,
    end_takeover,
    end_mixed,
};

const char* to_string(ChainBranch b);

/// One node-stage record: the branch taken, both routes' values, and whether
/// the LP result replaced the closed form.
struct BranchRecord {
    int stage = 0;  // 0-based
    int node = 0;
    ChainBranch branch = ChainBranch::lp_tie;
    double closed_value = 0.0;  // meaningless for lp_tie
    double lp_value = 0.0;
    bool agreed = false;
    bool used_lp = false;
};

struct ChainSolveResult {
    ScalarTable table;
    std::vector<BranchRecord> records;
    int overridden = 0;  // records with used_lp && branch != lp_tie
};

/// Closed-form solve of one node's stage game.  p_next spans all chain
/// nodes; g_t, d_t, a_t, f_t are that stage's coefficient rows.  Returns the
/// branch plus value/policies, or lp_tie when a defining comparison is within
/// 1e-12 of equality and the caller must use the LP.
struct NodeClosedForm {
    ChainBranch branch = ChainBranch::lp_tie;
    double p = 0.0;  // stage value including g_t
    std::vector<double> y, z;
};

NodeClosedForm solve_start_node(const Chain& c, const std::vector<double>& f_t,
                                const std::vector<double>& g_t, const std::vector<double>& d_t,
                                const std::vector<double>& a_t, const std::vector<double>& p_next);
NodeClosedForm solve_interior_node(const Chain& c, int node, const std::vector<double>& f_t,
                                   const std::vector<double>& g_t, const std::vector<double>& d_t,
                                   const std::vector<double>& a_t, const std::vector<double>& p_next);
NodeClosedForm solve_end_node(const Chain& c, const std::vector<double>& f_t,
                              const std::vector<double>& g_t, const std::vector<double>& d_t,
                              const std::vector<double>& a_t, const std::vector<double>& p_next);

/// Backward induction using the closed forms, each node cross-checked against
/// solve_zero_sum on the same stage matrix.  Disagreement beyond 1e-8 in
/// value, or a closed-form mixture that fails the saddle certificate, is
/// resolved in favor of the LP and recorded.
ChainSolveResult solve_closed_form(const ChainSpec& spec);

/// The same chain solved purely by the LP path (the reference route).
inline ScalarTable solve_lp_reference(const ChainSpec& spec) { return solve_lp(lower(spec)); }

}  // namespace takeover
