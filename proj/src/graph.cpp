#include "takeover/graph.hpp"

#include "takeover/errors.hpp"

#include <algorithm>
#include <string>

namespace takeover {

Graph make_graph(int node_count, const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::string> issues;
    if (node_count <= 0) issues.push_back("graph: node_count must be positive, got " + std::to_string(node_count));
    for (size_t e = 0; e < edges.size(); ++e) {
        auto [u, v] = edges[e];
        if (u < 0 || u >= node_count || v < 0 || v >= node_count)
            issues.push_back("graph.edges[" + std::to_string(e) + "]: (" + std::to_string(u) + ", " +
                             std::to_string(v) + ") out of range for " + std::to_string(node_count) +
                             " nodes");
    }
    if (!issues.empty()) throw SpecError(issues);

    Graph g;
    g.node_count = node_count;
    g.edges = edges;
    g.actions.assign(node_count, {});
    for (int a = 0; a < node_count; ++a) g.actions[a].push_back(a);
    for (auto [u, v] : edges) {
        if (v == u) continue;  // a self-loop adds nothing beyond the stay option
        auto& row = g.actions[u];
        if (std::find(row.begin(), row.end(), v) == row.end()) row.push_back(v);
    }
    for (auto& row : g.actions) std::sort(row.begin() + 1, row.end());
    return g;
}

bool is_action_of(const Graph& g, int node, int target) {
    const auto& row = g.actions[node];
    return std::find(row.begin(), row.end(), target) != row.end();
}

int next_node(const Graph& g, int current, int d, int a) {
    if (current < 0 || current >= g.node_count) throw SpecError("next_node: current node out of range");
    if (!is_action_of(g, current, d))
        throw SpecError("next_node: defender target " + std::to_string(d) + " is not an action at node " +
                        std::to_string(current));
    if (!is_action_of(g, current, a))
        throw SpecError("next_node: adversary target " + std::to_string(a) + " is not an action at node " +
                        std::to_string(current));
    if (d == a) return d;
    if (a == current) return d;
    if (d == current) return a;
    return current;
}

}  // namespace takeover
