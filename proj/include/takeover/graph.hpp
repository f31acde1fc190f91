#pragma once

#include <string>
#include <utility>
#include <vector>

namespace takeover {

/// Directed multigraph the game is played on.  Node indices are dense,
/// 0..node_count-1.  Parallel edges and self-loops are accepted on input but
/// collapse in the action sets: a player's options at node a are "stay at a"
/// plus every distinct out-neighbor of a.
struct Graph {
    int node_count = 0;
    std::vector<std::pair<int, int>> edges;
    /// actions[a] = a followed by the out-neighbors of a in ascending order.
    std::vector<std::vector<int>> actions;
};

/// Validates node indices and builds the per-node action lists.
/// Throws SpecError listing every offending edge.
Graph make_graph(int node_count, const std::vector<std::pair<int, int>>& edges);

bool is_action_of(const Graph& g, int node, int target);

/// Holder update when both players commit simultaneously.  `d` and `a` must
/// be actions available at `current` (i.e. current itself or one of its
/// out-neighbors).
///   - same choice            -> that node (a jointly forced move still moves)
///   - one moves, other stays -> the mover's target
///   - both move, different   -> no change of holder
int next_node(const Graph& g, int current, int d, int a);

}  // namespace takeover
