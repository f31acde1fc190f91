#include "takeover/stage_form.hpp"

#include <vector>

namespace takeover {

namespace {

NodeGame graph_node_game(const Graph& g, int node) {
    NodeGame ng;
    const std::vector<int>& acts = g.actions[node];
    for (int t : acts) {
        int cost = (t == node) ? -1 : t;
        ng.defender.push_back(StageAction{t, cost});
        ng.adversary.push_back(StageAction{t, cost});
    }
    const int n = (int)acts.size();
    ng.next.assign(n * n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            ng.next[i * n + j] = next_node(g, node, acts[i], acts[j]);
    return ng;
}

NodeGame chain_node_game(const Chain& c, int node) {
    NodeGame ng;
    const ChainAction idle = ChainAction::move(node);
    if (node == 0) {
        ng.defender = {StageAction{0, -1}, StageAction{0, 0}};
        ng.adversary = {StageAction{0, -1}, StageAction{1, 0}};
    } else if (node == c.length) {
        const int n = c.length;
        ng.defender = {StageAction{n, -1}, StageAction{n - 1, n}};
        ng.adversary = {StageAction{n, -1}, StageAction{n, n}};
    } else {
        const int lo = c.down[node], hi = c.up[node];
        ng.defender = {StageAction{node, -1}, StageAction{lo, node}};
        ng.adversary = {StageAction{node, -1}, StageAction{hi, node}};
    }

    auto as_chain_action = [&](const StageAction& sa) {
        // Ends use the takeover action; interior nodes move along the chain.
        if (sa.cost_node < 0) return idle;
        if (node == 0 || node == c.length) return ChainAction::take();
        return ChainAction::move(sa.target);
    };

    ng.next.assign(4, 0);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            ng.next[i * 2 + j] = next_node(c, node, as_chain_action(ng.defender[i]), as_chain_action(ng.adversary[j]));
    return ng;
}

}  // namespace

GameForm game_form(const Graph& g) {
    GameForm f;
    f.nodes.reserve(g.node_count);
    for (int v = 0; v < g.node_count; ++v) f.nodes.push_back(graph_node_game(g, v));
    return f;
}

GameForm game_form(const Chain& c) {
    GameForm f;
    const int count = c.node_count();
    f.nodes.reserve(count);
    for (int v = 0; v < count; ++v) f.nodes.push_back(chain_node_game(c, v));
    return f;
}

}  // namespace takeover
