#pragma once

#include <vector>

namespace takeover {

/// Birth-death chain on nodes 0..length with two-action players.
/// Interior node a: the defender may idle or retreat to down[a] (< a), the
/// adversary may idle or escalate to up[a] (> a).  Defaults are a-1 / a+1.
/// End nodes have idle plus a takeover action:
///   node 0:      adversary takeover escalates to 1; defender takeover
///                re-secures node 0 (holder unchanged).
///   node length: defender takeover pushes back to length-1; adversary
///                takeover re-takes the node (holder unchanged).
struct Chain {
    int length = 0;  // top node index; the chain has length+1 nodes
    std::vector<int> down;  // down[a] for 0 < a < length; ignored at ends
    std::vector<int> up;    // up[a]   for 0 < a < length; ignored at ends

    int node_count() const { return length + 1; }
};

Chain make_chain(int length);
/// Chain with explicit interior targets; down[a] < a < up[a] enforced.
Chain make_chain(int length, std::vector<int> down, std::vector<int> up);

/// Action of one player at one chain node: either a node index or the
/// takeover marker.
struct ChainAction {
    int target = 0;       // meaningful when !takeover
    bool takeover = false;

    static ChainAction move(int node) { return {node, false}; }
    static ChainAction take() { return {0, true}; }
};

/// Holder update for the chain game; `d`/`a` must be valid at `current`.
int next_node(const Chain& c, int current, ChainAction d, ChainAction a);

}  // namespace takeover
