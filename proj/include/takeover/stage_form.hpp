#pragma once

#include "takeover/chain.hpp"
#include "takeover/graph.hpp"

#include <vector>

namespace takeover {

/// One player's option at one node, reduced to what the stage matrix needs:
/// where the holder's dynamics land if this side wins the move, and which
/// node's takeover price is paid (cost_node < 0 means the option is idle and
/// free).
struct StageAction {
    int target = 0;
    int cost_node = -1;
};

/// Stage game at one node: both players' option lists (idle first) and the
/// holder-update table next[i*adversary.size()+j].
struct NodeGame {
    std::vector<StageAction> defender;
    std::vector<StageAction> adversary;
    std::vector<int> next;

    int next_at(int i, int j) const {
        return next[static_cast<size_t>(i) * adversary.size() + j];
    }
};

/// The whole game lowered node by node.  Every solver and the simulator run
/// on this form, so the graph and chain variants share one recursion.
struct GameForm {
    std::vector<NodeGame> nodes;

    int node_count() const { return static_cast<int>(nodes.size()); }
};

/// Graph game: both players choose among the node's action list; movers pay
/// the takeover price of the node they move to.
GameForm game_form(const Graph& g);

/// Chain game: two options per player per node; takeover prices are charged
/// at the node being fought over (the current one).
GameForm game_form(const Chain& c);

}  // namespace takeover
